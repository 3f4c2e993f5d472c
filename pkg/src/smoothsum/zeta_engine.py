"""Riemann zeta near the 1-line: Euler-Maclaurin evaluation, the regular
factor (s-1)*zeta(s), and the Vinogradov-Korobov bound check.

Euler-Maclaurin with Bernoulli corrections through B12 and cutoff
M = max(20, 2|Im s|) keeps the first omitted term below 1e-12 * |zeta(s)|
for |Im s| <= 1e6 (the estimate is returned, not assumed).  Near s = 1 the
regular factor switches to the Stieltjes expansion

    (s-1) zeta(s) = 1 + sum_{n>=0} (-1)^n gamma_n (s-1)^{n+1} / n!

whose constants are self-computed from Euler-Maclaurin values by a Cauchy
circle integral rather than copied from tables.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import cache
from .branching import BranchedPath, build_branched_path
from .errors import PrecisionLoss

# B_{2j} for j = 1..7; B14 only feeds the error estimate
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)
_N_CORRECTIONS = 6

LAURENT_RADIUS = 0.05
MAX_IM = 1.0e7
FORD_VK_CONSTANT = 76.2

_CHUNK = 1_000_000


@dataclass(frozen=True)
class ZetaValue:
    """zeta(s) together with the regular factor (s-1)*zeta(s).

    method is "euler_maclaurin" away from s=1 and "laurent" inside the
    Stieltjes disk; at s = 1 exactly only `regular` is defined (zeta is nan).
    """

    s: complex
    zeta: complex
    regular: complex
    method: str
    err_estimate: float


def _euler_maclaurin(s: complex, m_terms: int) -> tuple[complex, float]:
    M = m_terms
    total = 0.0 + 0.0j
    for lo in range(1, M, _CHUNK):
        n = np.arange(lo, min(lo + _CHUNK, M), dtype=np.float64)
        total += complex(np.sum(np.exp(-s * np.log(n))))
    mf = float(M)
    lm = math.log(mf)
    total += np.exp((1.0 - s) * lm) / (s - 1.0) + 0.5 * np.exp(-s * lm)
    # Bernoulli corrections: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * M^{-s-2j+1}
    rising = s
    fact = 1.0
    for j in range(1, _N_CORRECTIONS + 1):
        fact *= (2 * j - 1) * (2 * j)
        total += _BERNOULLI[j - 1] / fact * rising * np.exp((-s - 2 * j + 1) * lm)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    fact *= (2 * _N_CORRECTIONS + 1) * (2 * _N_CORRECTIONS + 2)
    tail = abs(_BERNOULLI[_N_CORRECTIONS] / fact * rising) * math.exp(
        (-s.real - 2 * _N_CORRECTIONS - 1) * lm
    )
    return complex(total), tail


def _stieltjes_from_em(n_max: int = 6, radius: float = 0.5, k: int = 256):
    """gamma_0..gamma_{n_max-1} via a Cauchy integral of (s-1)zeta(s) at s=1.

    Trapezoid on |s-1| = radius converges geometrically for this entire
    function; every sample is an Euler-Maclaurin value, so the constants are
    certified by the same engine they correct.
    """
    theta = 2.0 * np.pi * np.arange(k) / k
    ring = radius * np.exp(1j * theta)
    w = np.empty(k, dtype=np.complex128)
    for i, ds in enumerate(ring):
        s = 1.0 + ds
        z, _ = _euler_maclaurin(s, 64)
        w[i] = ds * z
    gammas = []
    for n in range(n_max):
        m = n + 1  # Taylor coefficient index of (s-1)zeta(s)
        c = np.sum(w * np.exp(-1j * m * theta)) / (k * radius**m)
        gammas.append((-1) ** n * math.factorial(n) * complex(c).real)
    return gammas


@lru_cache(maxsize=1)
def stieltjes_constants(n_max: int = 6) -> tuple[float, ...]:
    key = f"n_max={n_max}"
    hit = cache.load_floats("stieltjes.txt", key)
    if hit is not None and len(hit) == n_max:
        return tuple(hit)
    vals = _stieltjes_from_em(n_max)
    cache.store_floats("stieltjes.txt", key, vals)
    return tuple(vals)


def _regular_laurent(s: complex) -> complex:
    ds = s - 1.0
    total = 1.0 + 0.0j
    fact = 1.0
    power = ds  # ds^{n+1} at step n
    for n, g in enumerate(stieltjes_constants()):
        if n > 0:
            fact *= n
        total += (-1) ** n * g * power / fact
        power *= ds
    return complex(total)


def zeta(s: complex, em_terms: int | None = None) -> ZetaValue:
    """Evaluate zeta(s) for Re(s) >= 1/2 (at s = 1 only `regular` is valid).

    em_terms overrides the Euler-Maclaurin cutoff, which the self-consistency
    tests use by doubling it.
    """
    s = complex(s)
    if s.real < 0.5:
        raise ValueError("only the half-plane Re(s) >= 1/2 is supported")
    if abs(s.imag) > MAX_IM:
        raise PrecisionLoss(f"|Im s| > {MAX_IM:g} exceeds the certified range")
    if abs(s - 1.0) < LAURENT_RADIUS:
        reg = _regular_laurent(s)
        z = reg / (s - 1.0) if s != 1.0 else complex(float("nan"), float("nan"))
        return ZetaValue(s, z, reg, "laurent", 1e-15)
    M = em_terms if em_terms is not None else max(20, int(math.ceil(2 * abs(s.imag))))
    z, tail = _euler_maclaurin(s, M)
    return ZetaValue(s, z, (s - 1.0) * z, "euler_maclaurin", tail)


def _log_regular_vec(xs: np.ndarray, log_n: float) -> np.ndarray:
    out = np.empty(len(xs), dtype=np.complex128)
    for i, x in enumerate(xs):
        out[i] = np.log(zeta(1.0 + 1j * float(x) / log_n).regular)
    return out


def regular_factor_path(path_xs, log_n: float, max_refine: int = 40) -> BranchedPath:
    """Unwrapped log of A(x) = (s-1)zeta(s), s = 1 + ix/log N, anchored at
    A(0) = 1.  A is nonvanishing on the path since zeta(1+it) != 0."""
    if log_n <= 0:
        raise ValueError("log N must be positive")
    return build_branched_path(
        lambda xs: _log_regular_vec(xs, log_n),
        path_xs,
        anchor_x=0.0,
        anchor_log=0.0 + 0.0j,
        max_refine=max_refine,
    )


@dataclass(frozen=True)
class VKReport:
    t: float
    zeta_abs: float
    bound: float
    passed: bool


def vk_check(t: float) -> VKReport:
    """Check |zeta(1+it)| <= 76.2 * (log|t|)^(2/3) (Ford's explicit constant)."""
    t = float(t)
    if abs(t) < 3.0:
        raise ValueError("the bound is stated for |t| >= 3")
    lhs = abs(zeta(1.0 + 1j * t).zeta)
    rhs = FORD_VK_CONSTANT * math.log(abs(t)) ** (2.0 / 3.0)
    return VKReport(t, lhs, rhs, lhs <= rhs)
