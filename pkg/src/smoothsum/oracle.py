"""Ground-truth evaluation of the sum by direct enumeration.

Every k-free N-smooth integer with log n <= u_cutoff * log N is enumerated
depth-first and f(log n / log N) alpha^Omega(n) / n is accumulated with
exactly-rounded summation.  The truncation tail carries a certificate:
either the trivial envelope  sup_{u > cutoff} |f| * prod_p (1 + |alpha|/p +
... + |alpha|^{k-1}/p^{k-1})  or the sharper Rankin-shift bound.

Subtrees split on the exponent of the largest prime may be summed by
independent workers; partial sums are combined in fixed subtree order, so
the result is bit-identical at any thread count.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith_core import DEFAULT_COUNT_CAP, enumerate_kfree_smooth, sieve_primes
from .asymptotic import TestFunction
from .detsum import fsum_real
from .errors import DomainError
from .euler_products import g_abs_bound, g_product
from .params import SumParams

_BATCH = 65_536


@dataclass(frozen=True)
class BruteResult:
    value: complex
    terms_used: int
    u_cutoff: float
    tail_certificate: float


def _alpha_powers(alpha: complex, n: int) -> np.ndarray:
    out = np.empty(n + 1, dtype=np.complex128)
    out[0] = 1.0
    for i in range(1, n + 1):
        out[i] = out[i - 1] * alpha  # one multiply per step, as in the DFS
    return out


def _subtree_sum(params, f, log_cap, exponent, pows, count_cap):
    """(real fsum, imag fsum, count) over one largest-prime-exponent subtree."""
    primes = sieve_primes(params.N)
    log_n = params.log_n
    re_parts, im_parts = [], []
    count = 0
    logs, omegas = [], []

    def flush():
        nonlocal count
        if not logs:
            return
        ln = np.asarray(logs, dtype=np.float64)
        om = np.asarray(omegas, dtype=np.int64)
        terms = (
            np.asarray(f.eval_f(ln / log_n), dtype=np.complex128)
            * pows[om]
            * np.exp(-ln)
        )
        re_parts.append(fsum_real(terms.real.tolist()))
        im_parts.append(fsum_real(terms.imag.tolist()))
        count += len(logs)
        logs.clear()
        omegas.clear()

    for el in enumerate_kfree_smooth(
        primes,
        params.k,
        log_cap,
        count_cap=count_cap,
        largest_prime_exponent=exponent,
    ):
        logs.append(el.log_n)
        omegas.append(el.omega)
        if len(logs) >= _BATCH:
            flush()
    flush()
    return fsum_real(re_parts), fsum_real(im_parts), count


def brute_S(
    params: SumParams,
    f: TestFunction,
    u_cutoff: float | None = None,
    threads: int = 1,
    count_cap: int = DEFAULT_COUNT_CAP,
) -> BruteResult:
    """sum over k-free N-smooth n with log n <= u_cutoff log N of
    f(log n / log N) alpha^Omega(n) / n, with a certified truncation tail.

    u_cutoff=None takes the test function's default (placed where its
    envelope drops below ~1e-13); math.inf sums every term.
    """
    if u_cutoff is None:
        u_cutoff = f.default_u_cutoff
    if u_cutoff < 0:
        raise ValueError("u_cutoff must be >= 0 (or math.inf)")
    if params.alpha == 0:  # alpha^Omega kills every n > 1
        value = complex(np.complex128(f.eval_f(0.0)))
        return BruteResult(value, 1, float(u_cutoff), 0.0)
    primes = sieve_primes(params.N)
    log_cap = u_cutoff * params.log_n if not math.isinf(u_cutoff) else math.inf
    max_omega = (params.k - 1) * max(len(primes), 1)
    pows = _alpha_powers(params.alpha, max_omega)

    exps = list(range(params.k))
    if threads <= 1:
        parts = [
            _subtree_sum(params, f, log_cap, e, pows, count_cap) for e in exps
        ]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_subtree_sum, params, f, log_cap, e, pows, count_cap)
                for e in exps
            ]
            parts = [fut.result() for fut in futures]  # fixed subtree order

    value = complex(
        fsum_real(p[0] for p in parts), fsum_real(p[1] for p in parts)
    )
    terms = sum(p[2] for p in parts)
    if math.isinf(u_cutoff):
        cert = 0.0
    else:
        cert = f.sup_tail(u_cutoff) * g_abs_bound(params)
    return BruteResult(value, terms, float(u_cutoff), cert)


def rankin_tail(params: SumParams, f_envelope, u_cutoff: float, deltas=None) -> float:
    """Rankin-shift bound on the neglected tail: for any delta in (0, 1/2),

        sum_{n > X} |alpha|^Omega(n)/n <= X^{-delta} g_{|alpha|,k,N}(1-delta),

    with X = N^{u_cutoff}; minimized over a delta grid that includes the
    trivial delta=0 endpoint, so it never exceeds the trivial certificate.
    """
    if math.isinf(u_cutoff):
        return 0.0
    if deltas is None:
        deltas = np.linspace(0.0, 0.45, 10)
    if np.any(np.asarray(deltas) < 0) or np.any(np.asarray(deltas) >= 0.5):
        raise DomainError("every delta must lie in [0, 1/2)")
    abs_params = params.abs_alpha()
    log_x = u_cutoff * params.log_n
    best = math.inf
    for d in deltas:
        g = g_product(abs_params, 1.0 - float(d)).value.real
        best = min(best, math.exp(-float(d) * log_x) * g)
    return f_envelope(u_cutoff) * best
