"""The Dickman function rho, its Laplace transform, and branched powers.

rho solves the delay differential equation u*rho'(u) + rho(u-1) = 0 with
rho = 1 on (0, 1].  It is built interval by interval from the equivalent
integral form rho(u) = rho(m) - int_m^u rho(t-1)/t dt, one Chebyshev series
per unit interval (rho is analytic in each open interval, so the series
converges geometrically and its coefficient tail certifies the error).

The Laplace transform on the imaginary axis is evaluated through
s*rhohat(s) = exp(-J(s)), with J(s) = int_0^inf exp(-s-t)/(s+t) dt; J is
holomorphic off the cut (-inf, 0].  Fractional powers rhohat(ix)^alpha are
defined via a continuously unwrapped log anchored at rhohat(0) = e^gamma.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as cheb

from . import cache
from .branching import BranchedPath, PoweredPath, build_branched_path
from .errors import DomainError, ToleranceUnachievable
from .quadrature import integrate_adaptive

# Euler-Mascheroni constant.  exp(EULER_GAMMA) equals int_0^inf rho(u) du;
# the acceptance suite re-derives it from the table to confirm provenance.
EULER_GAMMA = 0.57721566490153286060651209008240243104215933593992
EXP_EULER_GAMMA = math.exp(EULER_GAMMA)

_MAX_CHEB_DEGREE = 96
_SERIES_RADIUS = 4.0  # |s| below which the -gamma - log s + sum series is used


@dataclass(frozen=True)
class DickmanTable:
    """Piecewise-Chebyshev representation of rho on [0, u_max], immutable."""

    u_max: float
    tol: float
    coeffs: tuple  # coeffs[m-1] covers [m, m+1]
    err_bound: float

    def rho(self, u):
        """rho(u) for u in [0, u_max]; exact 1 on [0, 1]."""
        uq = np.atleast_1d(np.asarray(u, dtype=np.float64))
        if uq.min() < 0 or uq.max() > self.u_max + 1e-12:
            raise ValueError("u outside [0, u_max]")
        out = np.ones_like(uq)
        above = uq > 1.0
        if np.any(above):
            m = np.minimum(np.floor(uq[above]).astype(int), len(self.coeffs))
            vals = np.empty(int(above.sum()))
            for piece in np.unique(m):
                sel = m == piece
                t = 2.0 * (uq[above][sel] - piece) - 1.0
                vals[sel] = cheb.chebval(t, self.coeffs[piece - 1])
            out[above] = vals
        return out if np.ndim(u) else float(out[0])

    def integral(self) -> float:
        """int_0^u_max rho(u) du, from the stored series (exact per piece)."""
        total = 1.0  # the [0, 1] block
        for c in self.coeffs:
            anti = cheb.chebint(c)
            total += 0.5 * (cheb.chebval(1.0, anti) - cheb.chebval(-1.0, anti))
        return total


def _build_piece(prev_eval, m: int, rho_m: float, tol: float):
    """Chebyshev series of rho on [m, m+1] given rho on [m-1, m]."""

    def integrand(t):  # t in [-1, 1] mapped to u in [m, m+1]
        u = m + 0.5 * (t + 1.0)
        return prev_eval(u - 1.0) / u

    deg = 24
    while deg <= _MAX_CHEB_DEGREE:
        c = cheb.chebinterpolate(integrand, deg)
        tail = float(np.max(np.abs(c[-4:])))
        if tail <= 0.01 * tol:
            anti = 0.5 * cheb.chebint(c)  # d(u) = 0.5 d(t)
            anti[0] -= cheb.chebval(-1.0, anti)  # vanish at u = m
            out = -anti
            out[0] += rho_m
            return out, tail
        deg *= 2
    raise ToleranceUnachievable(
        f"Chebyshev degree cap {_MAX_CHEB_DEGREE} cannot certify tol={tol} on "
        f"[{m}, {m + 1}]"
    )


def build_rho(u_max: float, tol: float) -> DickmanTable:
    """Build rho on [0, u_max] with certified absolute error <= tol."""
    if u_max < 1:
        raise ValueError("u_max must be >= 1")
    if not 0 < tol <= 1e-4:
        raise ValueError("tol must lie in (0, 1e-4]")
    cached = cache.load_floats(
        "dickman_table.txt", f"u_max={cache.fmt_float(u_max)} tol={cache.fmt_float(tol)}"
    )
    pieces = []
    err = 0.0
    if cached is not None:
        err = cached[0]
        lens = int(cached[1])
        off = 2
        for _ in range(int(np.ceil(u_max)) - 1):
            pieces.append(np.array(cached[off : off + lens]))
            off += lens
        return DickmanTable(u_max, tol, tuple(pieces), err)

    rho_m = 1.0
    for m in range(1, int(np.ceil(u_max))):
        if m == 1:
            prev = lambda u: np.ones_like(np.asarray(u, dtype=float))
        else:
            cm = pieces[m - 2]
            prev = lambda u, cm=cm, m=m: cheb.chebval(2.0 * (u - (m - 1)) - 1.0, cm)
        c, tail = _build_piece(prev, m, rho_m, tol)
        # inherited error grows by at most int_m^{m+1} dt/t when fed forward
        err = err * (1.0 + math.log((m + 1) / m)) + tail
        if err > tol:
            raise ToleranceUnachievable(
                f"accumulated error bound {err:.3e} exceeds tol={tol} at u={m + 1}"
            )
        pieces.append(c)
        rho_m = float(cheb.chebval(1.0, c))

    flat = [err, max((len(c) for c in pieces), default=0)]
    width = int(flat[1])
    for c in pieces:
        flat.extend(np.pad(c, (0, width - len(c))))
        # all pieces share one width so the cache file is rectangular
    cache.store_floats(
        "dickman_table.txt",
        f"u_max={cache.fmt_float(u_max)} tol={cache.fmt_float(tol)}",
        flat,
    )
    padded = tuple(np.pad(c, (0, width - len(c))) for c in pieces)
    return DickmanTable(u_max, tol, padded, err)


@lru_cache(maxsize=4)
def default_table(u_max: float = 45.0, tol: float = 1e-10) -> DickmanTable:
    return build_rho(u_max, tol)


def _expint_series(s: complex) -> complex:
    # J(s) = -gamma - log s + sum_{m>=1} (-1)^{m+1} s^m / (m * m!)
    acc = 0.0 + 0.0j
    term = 1.0 + 0.0j
    for m in range(1, 300):
        term *= -s / m
        contrib = -term / m
        acc += contrib
        if abs(contrib) < 1e-18 * max(1.0, abs(acc)):
            break
    return -EULER_GAMMA - np.log(complex(s)) + acc


def expint_J(s: complex, tol: float = 1e-13) -> complex:
    """J(s) = int_0^inf exp(-s-t)/(s+t) dt, holomorphic off (-inf, 0].

    Beyond the series radius the defining integral is taken along the ray
    t = e^{i phi} tau with phi = sign(Im s) pi/4 (0 for real s), which keeps
    the pole at t = -s a distance >= |s| sin(pi/4) from the contour even
    arbitrarily close to the cut; the rotation is justified by the decay of
    exp(-t) across the sector.
    """
    s = complex(s)
    if s.imag == 0.0 and s.real <= 0.0:
        raise DomainError("J is not defined on the branch cut (-inf, 0]")
    if abs(s) <= _SERIES_RADIUS:
        return _expint_series(s)
    if s.imag == 0.0:
        rot = 1.0 + 0.0j
        upper = 60.0  # tail < e^-60 / |s + 60|
    else:
        rot = np.exp(1j * math.copysign(math.pi / 4.0, s.imag))
        upper = 85.0  # e^{-85 cos(pi/4)} < 1e-26

    def f(t):
        return rot * np.exp(-rot * t) / (s + rot * t)

    res, _ = integrate_adaptive(f, 0.0, upper, tol, split_points=(), min_panels=16)
    return np.exp(-s) * res.value


@dataclass(frozen=True)
class RhoHatValue:
    """rhohat at a point of the imaginary axis, with its branch-ready log."""

    s: complex
    value: complex
    log_value: complex


@lru_cache(maxsize=500_000)
def _log_rho_hat(x: float) -> complex:
    if x == 0.0:
        return complex(EULER_GAMMA)
    s = 1j * x
    # -J(s) - Log(s) is continuous through x = 0 (the Log jumps cancel)
    return complex(-expint_J(s) - np.log(s))


def rho_hat(x: float) -> RhoHatValue:
    """rhohat(ix) = exp(-J(ix))/(ix) for x != 0, and the limit e^gamma at 0."""
    x = float(x)
    lv = _log_rho_hat(x)
    return RhoHatValue(1j * x, complex(np.exp(lv)), lv)


def _log_rho_hat_vec(xs: np.ndarray) -> np.ndarray:
    return np.array([_log_rho_hat(float(x)) for x in np.atleast_1d(xs)])


def rho_hat_path(path_xs, max_refine: int = 40) -> BranchedPath:
    """Unwrapped log of rhohat(ix) along a grid, anchored at rhohat(0)=e^gamma."""
    return build_branched_path(
        _log_rho_hat_vec,
        path_xs,
        anchor_x=0.0,
        anchor_log=complex(EULER_GAMMA),
        max_refine=max_refine,
    )


def rho_hat_pow(path_xs, alpha: complex, max_refine: int = 40) -> PoweredPath:
    """rhohat(ix)^alpha along the grid, branch unwrapped from the anchor x=0."""
    return PoweredPath(rho_hat_path(path_xs, max_refine=max_refine), complex(alpha))


def envelope_constants(scan_max: float = 10.0, n: int = 2001) -> tuple[float, float]:
    """Empirical (C1, C2) with C1 <= |rhohat(ix)|*sqrt(1+x^2) <= C2 on the scan."""
    xs = np.linspace(-scan_max, scan_max, n)
    vals = np.array([abs(rho_hat(float(x)).value) for x in xs])
    scaled = vals * np.sqrt(1.0 + xs**2)
    return float(scaled.min()), float(scaled.max())
