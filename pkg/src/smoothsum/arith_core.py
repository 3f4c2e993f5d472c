"""Primes, k-free smooth-integer enumeration, and smooth counting.

A "k-free N-smooth" integer has every prime factor <= N and every exponent
<= k-1.  Integers are never materialized: each one is carried as
(log n, Omega(n)) plus its exponent vector, since log n and Omega(n) are all
that downstream sums need and n itself can exceed 10^300.
"""

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .errors import CountCapExceeded

DEFAULT_COUNT_CAP = 200_000_000


@dataclass(frozen=True)
class PrimeSet:
    """All primes <= bound, ascending. Immutable after construction."""

    bound: int
    primes: np.ndarray
    log_primes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.primes.setflags(write=False)
        self.log_primes.setflags(write=False)

    def __len__(self) -> int:
        return len(self.primes)

    def restrict(self, bound: int) -> "PrimeSet":
        """The subset of primes <= bound (bound <= self.bound)."""
        if bound >= self.bound:
            return self
        cut = int(np.searchsorted(self.primes, bound, side="right"))
        return PrimeSet(bound, self.primes[:cut], self.log_primes[:cut])


class SmoothElement(NamedTuple):
    """One enumerated integer: log n, Omega(n), and its (prime, exponent) pairs."""

    log_n: float
    omega: int
    exponents: tuple


_sieve_cache: list = []  # single largest PrimeSet computed so far


def sieve_primes(bound: int) -> PrimeSet:
    """Primes <= bound by Eratosthenes. bound < 2 gives the empty set.

    The largest sieve computed is cached and smaller requests are sliced
    from it, so repeated calls across a run cost one sieve.
    """
    bound = int(bound)
    if _sieve_cache and _sieve_cache[0].bound >= bound:
        return _sieve_cache[0].restrict(bound)
    if bound < 2:
        empty = np.array([], dtype=np.int64)
        return PrimeSet(bound, empty, empty.astype(np.float64))
    is_prime = np.ones(bound + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, int(bound**0.5) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    primes = np.nonzero(is_prime)[0].astype(np.int64)
    ps = PrimeSet(bound, primes, np.log(primes.astype(np.float64)))
    _sieve_cache[:] = [ps]
    return ps


def enumerate_kfree_smooth(
    primes: PrimeSet,
    k: int,
    log_cap: float,
    count_cap: int = DEFAULT_COUNT_CAP,
    largest_prime_exponent: int | None = None,
) -> Iterator[SmoothElement]:
    """Depth-first stream of every k-free integer supported on `primes`
    with log n <= log_cap, including n = 1.

    Order is deterministic: at each level the next prime is chosen ascending
    and its exponent ascending, parent before subtree.  With
    `largest_prime_exponent = e` only the subtree where the largest prime
    carries exponent e is walked; the k subtrees partition the full stream,
    which is what the parallel reduction in `oracle` relies on.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if log_cap < 0:
        raise ValueError("log_cap must be >= 0")
    if np.isinf(log_cap) and largest_prime_exponent is None:
        # full tree has exactly k^pi(N) leaves; refuse blowups up front
        if len(primes) * np.log(k) > np.log(count_cap):
            raise CountCapExceeded(
                f"k^pi(N) = {k}^{len(primes)} exceeds count cap {count_cap}"
            )
    # native scalars: numpy scalar arithmetic is ~10x slower in this loop
    logs = [float(v) for v in primes.log_primes]
    pvals = [int(p) for p in primes.primes]
    n_primes = len(pvals)
    budget = [count_cap]

    def emit(log_n, omega, exps):
        if budget[0] <= 0:
            raise CountCapExceeded(f"enumeration exceeded count cap {count_cap}")
        budget[0] -= 1
        return SmoothElement(log_n, omega, exps)

    def walk(start: int, stop: int, log_n: float, omega: int, exps: tuple):
        for j in range(start, stop):
            lp = logs[j]
            if log_n + lp > log_cap:
                break  # primes ascend, so every later j prunes too
            add = 0.0
            for e in range(1, k):
                add += lp
                if log_n + add > log_cap:
                    break
                child = exps + ((pvals[j], e),)
                yield emit(log_n + add, omega + e, child)
                yield from walk(j + 1, stop, log_n + add, omega + e, child)

    if largest_prime_exponent is None:
        yield emit(0.0, 0, ())
        yield from walk(0, n_primes, 0.0, 0, ())
        return

    e0 = largest_prime_exponent
    if not 0 <= e0 <= k - 1:
        raise ValueError("largest_prime_exponent must lie in [0, k-1]")
    if n_primes == 0:
        if e0 == 0:
            yield emit(0.0, 0, ())
        return
    if e0 == 0:
        yield emit(0.0, 0, ())
        yield from walk(0, n_primes - 1, 0.0, 0, ())
        return
    root_log = e0 * logs[n_primes - 1]
    if root_log > log_cap:
        return
    suffix = ((pvals[n_primes - 1], e0),)  # keep exponents ascending in p
    yield emit(root_log, e0, suffix)
    for el in walk(0, n_primes - 1, root_log, e0, ()):
        yield SmoothElement(el.log_n, el.omega, el.exponents + suffix)


def count_smooth(x: float, y: float, count_cap: int = DEFAULT_COUNT_CAP) -> int:
    """Psi(x, y): the number of y-smooth integers <= x (no k-free restriction).

    Runs in exact integer arithmetic so boundary cases like n = x are never
    lost to rounding.
    """
    if x < 1 or y < 2:
        raise ValueError("need x >= 1 and y >= 2")
    xi = int(np.floor(x))
    pvals = [int(p) for p in sieve_primes(int(np.floor(y))).primes]
    budget = [count_cap]

    def walk(start: int, n: int) -> int:
        if budget[0] <= 0:
            raise CountCapExceeded(f"count exceeded cap {count_cap}")
        budget[0] -= 1
        total = 1  # n itself
        for j in range(start, len(pvals)):
            m = n * pvals[j]
            if m > xi:
                break
            while m <= xi:
                total += walk(j + 1, m)
                m *= pvals[j]
        return total

    return walk(0, 1)
