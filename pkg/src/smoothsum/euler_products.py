"""Finite and infinite products over primes.

For z = p^(-s) and w = alpha*z the three players are

    zeta_N(s)          factor (1-z)^(-1)
    g_{alpha,k,N}(s)   factor 1 + w + ... + w^(k-1) = (1-w^k)/(1-w)
    h_{alpha,k,N}(s)   factor (1-w)^(-1) (1-z)^alpha (1-w^k)

and g = zeta_N^alpha * h holds factor by factor once zeta_N^alpha is read as
exp(alpha * sum_p -Log(1-z)).  Every product here is accumulated as a sum of
*piece* logs: the principal Log of each algebraic piece above, never the log
of an assembled factor value.  That convention makes the factorization
identity exact by construction (assembled factors can silently cross the
principal branch for |alpha| beyond ~2) and it is what the grouped powers in
`asymptotic` rely on.

Scalar products use exactly-rounded fsum accumulation; the vectorized
multi-node helpers use numpy sums over a fixed chunking, so both are
bit-reproducible at any thread count.
"""

import math
from dataclasses import dataclass

import numpy as np

from .arith_core import PrimeSet, sieve_primes
from .detsum import fsum_complex
from .errors import DomainError, SingularFactor, ToleranceUnachievable
from .params import SumParams

DEFAULT_PRIME_CAP = 100_000_000
_ROSSER = 1.25506  # pi(x) < 1.25506 x / log x for x > 1
_POLE_TOL = 1e-12  # exact singular-factor hit
_NEAR_TOL = 1e-6  # below this, (1-w^k)/(1-w) is evaluated as the geometric sum
_CHUNK_BUDGET = 4_000_000  # complex scratch entries per prime chunk


@dataclass(frozen=True)
class ProductValue:
    """A product over primes: value, its accumulated log, and a tail bound
    on the neglected factors (0 for finite products)."""

    value: complex
    log_value: complex
    tail_bound: float


def _as_nodes(s) -> np.ndarray:
    return np.atleast_1d(np.asarray(s, dtype=np.complex128))


def _geom_sum(w: np.ndarray, k: int) -> np.ndarray:
    acc = np.ones_like(w)
    term = np.ones_like(w)
    for _ in range(k - 1):
        term = term * w
        acc = acc + term
    return acc


def _g_piece_logs(alpha: complex, k: int, z: np.ndarray) -> np.ndarray:
    """Principal-piece log of 1 + w + ... + w^(k-1), w = alpha*z."""
    w = alpha * z
    near = np.abs(1.0 - w) < _NEAR_TOL
    out = np.empty(z.shape, dtype=np.complex128)
    ok = ~near
    if np.any(ok):
        out[ok] = -np.log(1.0 - w[ok]) + np.log(1.0 - w[ok] ** k)
    if np.any(near):
        geom = _geom_sum(w[near], k)
        if np.any(np.abs(geom) < 1e-300):
            raise SingularFactor("a k-free factor vanishes at this point")
        out[near] = np.log(geom)
    return out


def _h_piece_logs(
    alpha: complex, k: int, z: np.ndarray, regularize: bool = False
) -> np.ndarray:
    """Piece log of (1-w)^(-1) (1-z)^alpha (1-w^k), branch per piece.

    With regularize=True an exact hit w = 1 takes the continuous extension
    (1-z)^alpha * k instead of raising; the contour machinery needs the
    removable value, the public point evaluations keep the error contract.
    """
    w = alpha * z
    gap = np.abs(1.0 - w)
    if not regularize and np.any(gap < _POLE_TOL):
        raise SingularFactor("alpha * p^(-s) = 1: singular Euler factor")
    lz = np.log(1.0 - z)  # |z| < 1, so principal and smooth
    out = alpha * lz
    near = gap < _NEAR_TOL
    ok = ~near
    res = np.empty(z.shape, dtype=np.complex128)
    if np.any(ok):
        res[ok] = -np.log(1.0 - w[ok]) + np.log(1.0 - w[ok] ** k)
    if np.any(near):
        geom = _geom_sum(w[near], k)
        if np.any(np.abs(geom) < 1e-300):
            raise SingularFactor("a k-free factor vanishes at this point")
        res[near] = np.log(geom)
    return out + res


def _chunked_piece_sum(piece_fn, primes: PrimeSet, s_nodes: np.ndarray) -> np.ndarray:
    """sum_p piece_log(p, s) for every node, fixed chunking over primes."""
    nodes = len(s_nodes)
    chunk = max(1024, _CHUNK_BUDGET // max(nodes, 1))
    logp = primes.log_primes
    acc = np.zeros(nodes, dtype=np.complex128)
    for lo in range(0, len(logp), chunk):
        lp = logp[lo : lo + chunk]
        z = np.exp(-np.outer(lp, s_nodes))
        acc = acc + piece_fn(z).sum(axis=0)
    return acc


def _require_halfplane(s_nodes: np.ndarray, floor: float = 0.5) -> None:
    if np.any(s_nodes.real <= floor):
        raise DomainError(f"need Re(s) > {floor} for every node")


def zeta_partial(primes: PrimeSet, s: complex) -> ProductValue:
    """zeta_N(s) = prod_{p<=N} (1 - p^(-s))^(-1), log = -sum Log(1-p^(-s))."""
    s = complex(s)
    _require_halfplane(np.array([s]))
    z = np.exp(-s * primes.log_primes)
    log_value = fsum_complex(-np.log(1.0 - z))
    return ProductValue(complex(np.exp(log_value)), log_value, 0.0)


def zeta_partial_values(primes: PrimeSet, s_nodes) -> np.ndarray:
    """Vectorized zeta_N over nodes (no per-node ProductValue wrapping)."""
    nodes = _as_nodes(s_nodes)
    _require_halfplane(nodes)
    return np.exp(_chunked_piece_sum(lambda z: -np.log(1.0 - z), primes, nodes))


def g_product(params: SumParams, s: complex) -> ProductValue:
    """g_{alpha,k,N}(s) = prod_{p<=N} (1 + alpha/p^s + ... + alpha^(k-1)/p^((k-1)s)).

    The ratio form (1-w^k)/(1-w) is used per factor except within 1e-6 of
    w = 1, where the geometric sum is evaluated directly.
    """
    s = complex(s)
    _require_halfplane(np.array([s]))
    primes = sieve_primes(params.N)
    z = np.exp(-s * primes.log_primes)
    log_value = fsum_complex(_g_piece_logs(params.alpha, params.k, z))
    return ProductValue(complex(np.exp(log_value)), log_value, 0.0)


def g_values(params: SumParams, s_nodes, primes: PrimeSet | None = None) -> np.ndarray:
    nodes = _as_nodes(s_nodes)
    _require_halfplane(nodes)
    primes = primes if primes is not None else sieve_primes(params.N)
    pieces = _chunked_piece_sum(
        lambda z: _g_piece_logs(params.alpha, params.k, z), primes, nodes
    )
    return np.exp(pieces)


def g_abs_bound(params: SumParams) -> float:
    """prod_{p<=N} (1 + |alpha|/p + ... + |alpha|^(k-1)/p^(k-1)): the trivial
    envelope sup_x |g(1+ix/log N)| used by tail certificates."""
    primes = sieve_primes(params.N)
    z = np.exp(-primes.log_primes)  # real p^(-1)
    geom = _geom_sum(abs(params.alpha) * z, params.k)
    return float(np.exp(math.fsum(np.log(geom))))


def h_finite(params: SumParams, s: complex) -> ProductValue:
    """h_{alpha,k,N}(s) = prod_{p<=N} (1-alpha/p^s)^(-1) (1-1/p^s)^alpha (1-alpha^k/p^(ks)).

    (1-1/p^s)^alpha means exp(alpha*Log(1-p^(-s))) per factor.  Raises
    SingularFactor on an exact pole hit alpha*p^(-s) = 1.
    """
    s = complex(s)
    _require_halfplane(np.array([s]))
    primes = sieve_primes(params.N)
    z = np.exp(-s * primes.log_primes)
    log_value = fsum_complex(_h_piece_logs(params.alpha, params.k, z))
    return ProductValue(complex(np.exp(log_value)), log_value, 0.0)


_SERIES_FLOOR = 1024  # primes above this use the factor-log power series
_SERIES_TERMS = 8


def _h_series_coeff(alpha: complex, k: int, m: int) -> complex:
    # log h_p = sum_{m>=2} e_m z^m for |alpha z| < 1 (Mercator of each piece)
    e = (alpha**m - alpha) / m
    if m % k == 0:
        e -= (k / m) * alpha**m
    return e


def h_series_trunc_log_bound(alpha: complex, k: int, sigma: float, floor: float) -> float:
    """|sum_{p > floor} (log h_p - degree-_SERIES_TERMS series)|, certified.

    Per factor the dropped terms are sum_{m > M} e_m z^m with
    |e_m| <= (2+k) A^m (A = max(1,|alpha|)), geometrically summed under
    A|z| <= 1/2; the prime tail uses pi(x) < 1.25506 x/log x.
    """
    big = max(1.0, abs(alpha))
    if big / floor**sigma > 0.5:
        return math.inf
    m1 = _SERIES_TERMS + 1
    return 2.0 * (2.0 + k) * big**m1 * _prime_sum_bound(m1 * sigma, floor)


def _h_log_sum(
    alpha: complex,
    k: int,
    s_nodes: np.ndarray,
    primes: PrimeSet,
    regularize: bool = False,
) -> tuple[np.ndarray, float]:
    """sum_p log h_p per node: exact piece logs for p <= _SERIES_FLOOR, the
    power series beyond (complex logs dominate the cost otherwise).  Returns
    (log sums, certified series-truncation bound)."""
    cut = int(np.searchsorted(primes.primes, _SERIES_FLOOR, side="right"))
    small = PrimeSet(_SERIES_FLOOR, primes.primes[:cut], primes.log_primes[:cut])
    acc = _chunked_piece_sum(
        lambda z: _h_piece_logs(alpha, k, z, regularize), small, s_nodes
    )
    if cut == len(primes.primes):
        return acc, 0.0
    coeffs = [_h_series_coeff(alpha, k, m) for m in range(2, _SERIES_TERMS + 1)]

    def series_pieces(z):
        zm = z * z
        out = coeffs[0] * zm
        for cm in coeffs[1:]:
            zm = zm * z
            out = out + cm * zm
        return out

    tail_primes = PrimeSet(
        primes.bound, primes.primes[cut:], primes.log_primes[cut:]
    )
    acc = acc + _chunked_piece_sum(series_pieces, tail_primes, s_nodes)
    sigma = float(np.min(s_nodes.real))
    return acc, h_series_trunc_log_bound(alpha, k, sigma, _SERIES_FLOOR)


def h_values(alpha: complex, k: int, s_nodes, primes: PrimeSet) -> np.ndarray:
    nodes = _as_nodes(s_nodes)
    _require_halfplane(nodes)
    logs, _ = _h_log_sum(alpha, k, nodes, primes)
    return np.exp(logs)


def _prime_sum_bound(a: float, P: float) -> float:
    # sum_{p > P} p^(-a) <= 1.25506 * a / ((a-1) log P) * P^(1-a), a > 1
    return _ROSSER * a / ((a - 1.0) * math.log(P)) * P ** (1.0 - a)


def h_tail_log_bound(alpha: complex, k: int, sigma: float, P: float) -> float:
    """Bound on |sum_{p > P} log h_p| from the factor-log expansion: each
    factor log is (alpha^2-alpha)/2 p^(-2s) + ... = O(p^(-2 sigma))."""
    a = abs(alpha)
    big = max(1.0, a)
    if P ** sigma < 2.0 * big:
        return math.inf
    return 2.0 * a * abs(alpha - 1.0) * _prime_sum_bound(2.0 * sigma, P) + 2.0 * (
        a**k
    ) * _prime_sum_bound(k * sigma, P)


def h_cutoff(
    alpha: complex, k: int, sigma: float, tol: float, prime_cap: int = DEFAULT_PRIME_CAP
) -> tuple[int, float]:
    """Smallest doubling cutoff P with certified |log tail| <= tol."""
    P = 128
    while True:
        bound = h_tail_log_bound(alpha, k, sigma, P)
        if bound <= tol:
            return P, bound
        if P >= prime_cap:
            raise ToleranceUnachievable(
                f"h tail {bound:.2e} > tol {tol:.2e} at the sieve cap {prime_cap}"
            )
        P = min(2 * P, prime_cap)


def h_infinite(
    alpha: complex,
    k: int,
    s: complex,
    tol: float,
    prime_cap: int = DEFAULT_PRIME_CAP,
) -> ProductValue:
    """h_{alpha,k}(s) = prod over all p, truncated at a cutoff with certified
    |log tail| <= tol.  Needs Re(s) >= 1 (the 1-line is the use case)."""
    s = complex(s)
    if s.real < 1.0:
        raise DomainError("h_infinite is certified for Re(s) >= 1 only")
    if k < 2:
        raise ValueError("k must be >= 2")
    alpha = complex(alpha)
    P, log_tail = h_cutoff(alpha, k, s.real, tol, prime_cap)
    primes = sieve_primes(P)
    z = np.exp(-s * primes.log_primes)
    log_value = fsum_complex(_h_piece_logs(alpha, k, z))
    value = complex(np.exp(log_value))
    return ProductValue(value, log_value, abs(value) * math.expm1(log_tail))


@dataclass(frozen=True)
class Lemma1Report:
    """Measured agreement of h_{alpha,k,N} with its infinite-product limit."""

    alpha: complex
    k: int
    n_values: tuple
    max_errors: tuple  # max over the tau grid of |h_N/h - 1|, per N
    decay_ratios: tuple  # max_errors[i] / max_errors[i+1]
    expected_ratios: tuple  # (N_{i+1} log N_{i+1}) / (N_i log N_i)
    h_tol: float


def lemma1_check(
    alpha: complex,
    k: int,
    N_values,
    tau_grid,
    h_tol: float = 1e-7,
    prime_cap: int = DEFAULT_PRIME_CAP,
) -> Lemma1Report:
    """Measure max_tau |h_{alpha,k,N}(1+i tau)/h_{alpha,k}(1+i tau) - 1| per N
    and the decay ratio between consecutive N (the 1/(N log N) scaling)."""
    alpha = complex(alpha)
    n_values = tuple(int(n) for n in N_values)
    if any(n < 100 for n in n_values):
        raise ValueError("every N must be >= 100")
    taus = np.asarray(list(tau_grid), dtype=np.float64)
    if alpha == 0:
        errs = tuple(0.0 for _ in n_values)
    else:
        P, _ = h_cutoff(alpha, k, 1.0, h_tol, prime_cap)
        primes = sieve_primes(max(P, max(n_values)))
        cuts = [int(np.searchsorted(primes.primes, n, side="right")) for n in n_values]
        errs_acc = [0.0] * len(n_values)
        for tau in taus:
            s = 1.0 + 1j * float(tau)
            pieces = _h_piece_logs(alpha, k, np.exp(-s * primes.log_primes))
            total = np.sum(pieces)
            for i, cut in enumerate(cuts):
                log_ratio = np.sum(pieces[:cut]) - total
                errs_acc[i] = max(errs_acc[i], abs(np.exp(log_ratio) - 1.0))
        errs = tuple(float(e) for e in errs_acc)
    ratios = tuple(
        errs[i] / errs[i + 1] if errs[i + 1] > 0 else math.inf
        for i in range(len(errs) - 1)
    )
    expected = tuple(
        (n_values[i + 1] * math.log(n_values[i + 1]))
        / (n_values[i] * math.log(n_values[i]))
        for i in range(len(n_values) - 1)
    )
    return Lemma1Report(alpha, k, n_values, errs, ratios, expected, h_tol)
