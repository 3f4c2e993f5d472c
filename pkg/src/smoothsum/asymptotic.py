"""Test functions and the three views of the smooth k-free sum.

The target sum S(alpha, k; N) = sum f(log n / log N) alpha^Omega(n) / n over
k-free N-smooth n equals, exactly (the sum is finite, the transform pair is
the convention f(t) = int fhat(x) e^{-ixt} dx),

    int fhat(x) g_{alpha,k,N}(1 + ix/log N) dx,

and asymptotically C_f(alpha,k;N) (log N)^alpha with

    C_f = int_{|x|<=3 log N} fhat(x) rhohat(ix)^alpha
          [ (s-1) zeta(s) ]^alpha  h_{alpha,k}(s) dx,     s = 1 + ix/log N.

The zeta^alpha (ix/log N)^alpha grouping is evaluated as A(x)^alpha with
A = (s-1) zeta(s): both A and rhohat are nonvanishing on the contour, so
their logs unwrap continuously from the real-positive anchors A(0) = 1 and
rhohat(0) = e^gamma, which pins the otherwise ambiguous complex powers.
(log N)^alpha always means exp(alpha log log N), the real-positive branch.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as cheb

from . import dickman, zeta_engine
from .branching import BranchedPath
from .errors import EtaTooSmall, ToleranceUnachievable
from .euler_products import g_abs_bound, g_values, h_cutoff, zeta_partial_values
from .params import SumParams
from .quadrature import QuadResult, integrate_adaptive
from .arith_core import sieve_primes

_FOURIER_CHECK_POINTS = 5
_FOURIER_CHECK_TOL = 1e-6


@dataclass(frozen=True)
class TestFunction:
    """A pair (f, fhat) under f(t) = int fhat(x) e^{-ixt} dx, with a certified
    decay exponent eta for fhat and a window [-X, X] holding all but
    `fhat_tail_bound` of the mass of |fhat|."""

    family: str
    eval_f: object
    eval_fhat: object
    eta: float
    fhat_cutoff: float
    fhat_tail_bound: float
    sup_tail: object  # u -> sup_{u' > u} |f(u')|
    default_u_cutoff: float
    test_only: bool = False

    def describe(self) -> str:
        return self.family


def _erfc_threshold(target: float) -> float:
    lo, hi = 1.0, 14.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.erfc(mid) > target:
            lo = mid
        else:
            hi = mid
    return hi


def make_gaussian(mu: float, sigma: float, eta: float = 6.0) -> TestFunction:
    """f(t) = exp(-(t-mu)^2 / (2 sigma^2)), whose transform under the module
    convention is fhat(x) = sigma/sqrt(2 pi) exp(-sigma^2 x^2 / 2) e^{i mu x}.

    Decay is super-polynomial, so any requested eta is certified; the window
    cutoff puts the |fhat| tail below 1e-14 (closed form erfc).
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    mu, sigma = float(mu), float(sigma)
    q = _erfc_threshold(1e-14)
    x_max = q * math.sqrt(2.0) / sigma
    tail = math.erfc(sigma * x_max / math.sqrt(2.0))
    c = sigma / math.sqrt(2.0 * math.pi)

    def f(t):
        t = np.asarray(t, dtype=np.float64)
        return np.exp(-((t - mu) ** 2) / (2.0 * sigma**2))

    def fhat(x):
        x = np.asarray(x, dtype=np.float64)
        return c * np.exp(-0.5 * sigma**2 * x**2) * np.exp(1j * mu * x)

    def sup_tail(u):
        if math.isinf(u):
            return 0.0
        return 1.0 if u <= mu else math.exp(-((u - mu) ** 2) / (2.0 * sigma**2))

    return TestFunction(
        family=f"gaussian(mu={mu:g}, sigma={sigma:g})",
        eval_f=f,
        eval_fhat=fhat,
        eta=float(eta),
        fhat_cutoff=x_max,
        fhat_tail_bound=tail,
        sup_tail=sup_tail,
        default_u_cutoff=mu + sigma * math.sqrt(60.0),
    )


def make_test_constant() -> TestFunction:
    """f == 1: no transform, no decay -- usable only by the brute-force oracle,
    where it makes the full sum a closed-form Euler product."""
    return TestFunction(
        family="constant-1 (test mode)",
        eval_f=lambda t: np.ones_like(np.asarray(t, dtype=np.float64)),
        eval_fhat=None,
        eta=0.0,
        fhat_cutoff=math.inf,
        fhat_tail_bound=math.inf,
        sup_tail=lambda u: 0.0 if math.isinf(u) else 1.0,
        default_u_cutoff=math.inf,
        test_only=True,
    )


def make_tabulated(
    eval_f,
    eval_fhat,
    eta: float,
    fhat_cutoff: float,
    fhat_tail_bound: float,
    sup_tail,
    default_u_cutoff: float,
    family: str = "tabulated",
) -> TestFunction:
    """Wrap a user-supplied pair, verifying the Fourier convention by
    quadrature at 5 fixed sample points (mismatch >= 1e-6 is rejected:
    a wrong sign or 2 pi convention would silently corrupt every result)."""
    rng = np.random.default_rng(20260809)
    ts = rng.uniform(-2.0, 2.0, _FOURIER_CHECK_POINTS)
    for t in ts:
        res, _ = integrate_adaptive(
            lambda x: np.asarray(eval_fhat(x)) * np.exp(-1j * x * t),
            -fhat_cutoff,
            fhat_cutoff,
            1e-9,
        )
        expect = complex(np.complex128(eval_f(t)))
        if abs(res.value - expect) > _FOURIER_CHECK_TOL + fhat_tail_bound:
            raise ValueError(
                f"fhat does not invert to f at t={t:.4f}: "
                f"integral {res.value:.8g} vs f(t) {expect:.8g} "
                "(convention is f(t) = int fhat(x) exp(-ixt) dx)"
            )
    return TestFunction(
        family,
        eval_f,
        eval_fhat,
        float(eta),
        float(fhat_cutoff),
        float(fhat_tail_bound),
        sup_tail,
        float(default_u_cutoff),
    )


def _require_transform(f: TestFunction) -> None:
    if f.test_only or f.eval_fhat is None:
        raise ValueError("this operation needs a test function with a transform")


def exact_integral(
    params: SumParams,
    f: TestFunction,
    tol: float = 1e-7,
    min_panels: int = 8,
    max_panels: int = 4096,
) -> QuadResult:
    """S(alpha,k;N) as the exact window integral of fhat(x) g(1 + ix/log N).

    Equals the finite sum up to quadrature error plus the certified window
    tail |fhat| outside [-X, X] times the trivial sup bound on |g|.
    """
    _require_transform(f)
    if not 0 < tol <= 1e-3:
        raise ValueError("tol must lie in (0, 1e-3]")
    primes = sieve_primes(params.N)
    log_n = params.log_n
    x_max = f.fhat_cutoff

    def integrand(xs):
        s_nodes = 1.0 + 1j * np.asarray(xs) / log_n
        return f.eval_fhat(xs) * g_values(params, s_nodes, primes)

    res, _ = integrate_adaptive(
        integrand, -x_max, x_max, 0.5 * tol, min_panels=min_panels, max_panels=max_panels
    )
    tail = f.fhat_tail_bound * g_abs_bound(params)
    return QuadResult(res.value, res.quad_error, tail, res.node_count)


# --- main-term machinery ----------------------------------------------------

_H_MAX_DEGREE = 512


@lru_cache(maxsize=64)
def _h_contour(alpha: complex, k: int, variant_N: int, h_tol: float):
    """Chebyshev model of tau -> h(1 + i tau) on |tau| <= 3.

    The main-term contour is s = 1 + ix/log N with |x| <= 3 log N, i.e.
    always the segment |tau| <= 3 of the 1-line, so one interpolant serves
    every N.  variant_N = 0 selects the infinite product (cutoff from its
    certified tail bound); variant_N = N > 0 selects h_{alpha,k,N}.
    Returns (coeffs, uniform_abs_error); query at t = x / (3 log N).
    """
    from .euler_products import _h_log_sum

    if variant_N > 0:
        primes = sieve_primes(variant_N)
        log_tail = 0.0
    else:
        P, log_tail = h_cutoff(alpha, k, 1.0, h_tol)
        primes = sieve_primes(P)
    trunc = [0.0]

    def sample(ts):
        s_nodes = 1.0 + 3.0j * np.asarray(ts, dtype=np.float64)
        # removable hits (alpha p^{-s} = 1 at a sample node) take their limit
        logs, tb = _h_log_sum(complex(alpha), k, s_nodes, primes, regularize=True)
        trunc[0] = max(trunc[0], tb)
        return np.exp(logs)

    deg = 64
    while deg <= _H_MAX_DEGREE:
        coeffs = cheb.chebinterpolate(sample, deg)
        tail = float(np.max(np.abs(coeffs[-4:])))
        scale = float(np.max(np.abs(cheb.chebval(np.linspace(-1, 1, 65), coeffs))))
        if tail <= max(0.5 * h_tol, 1e-13) * max(scale, 1e-6):
            unc = tail + scale * (math.expm1(log_tail) + math.expm1(trunc[0]))
            return coeffs, unc
        deg *= 2
    raise ToleranceUnachievable(
        f"h contour interpolation did not reach tol {h_tol:.1e} at degree "
        f"{_H_MAX_DEGREE}"
    )


def _branch_grid(half: float) -> np.ndarray:
    n = max(129, 2 * int(half) + 1)
    if n % 2 == 0:
        n += 1
    return np.linspace(-half, half, n)


def main_term(
    params: SumParams,
    f: TestFunction,
    tol: float = 1e-7,
    n_floor: int = 20,
    min_panels: int = 8,
    max_panels: int = 4096,
    use_integer_powers: bool = False,
    h_variant: str = "infinite",
    h_tol: float | None = None,
    max_refine: int = 40,
) -> QuadResult:
    """C_f(alpha,k;N): the restricted integral whose (log N)^alpha multiple is
    the dominant behaviour of the sum.

    Requires eta > max(1, 1 - Re alpha).  With use_integer_powers=True
    (integer alpha only) the power factors are evaluated by plain repeated
    multiplication instead of branched logs -- the cross-route oracle for the
    branch convention.  h_variant="finite" substitutes h_{alpha,k,N}, which
    the error-decomposition report uses to measure the h_N -> h substitution
    step.  h_tol (default tol/10) sets the h-product cutoff; comparisons that
    share the cached h model may relax it independently of the quadrature
    budget.
    """
    _require_transform(f)
    alpha, k = params.alpha, params.k
    if f.eta <= max(1.0, 1.0 - alpha.real):
        raise EtaTooSmall(
            f"need eta > max(1, 1-Re alpha) = {max(1.0, 1.0 - alpha.real):g}, "
            f"got {f.eta:g}"
        )
    if params.N < n_floor:
        raise ValueError(f"N below the configured floor {n_floor}")
    if h_variant not in ("infinite", "finite"):
        raise ValueError("h_variant must be 'infinite' or 'finite'")
    log_n = params.log_n
    half = 3.0 * log_n
    variant_N = params.N if h_variant == "finite" else 0
    h_coeffs, h_unc = _h_contour(
        alpha, k, variant_N, tol / 10.0 if h_tol is None else h_tol
    )

    def h_at(xs):
        return cheb.chebval(np.asarray(xs) / half, h_coeffs)

    if use_integer_powers:
        m = round(alpha.real)
        if abs(alpha - m) > 1e-12:
            raise ValueError("use_integer_powers needs integer alpha")

        def powers(xs):
            out = np.empty(len(xs), dtype=np.complex128)
            for i, x in enumerate(xs):
                rv = dickman.rho_hat(float(x)).value
                av = zeta_engine.zeta(1.0 + 1j * float(x) / log_n).regular
                out[i] = rv**m * av**m
            return out

    else:
        grid = _branch_grid(half)
        rho_path = dickman.rho_hat_path(grid, max_refine=max_refine)
        a_path = zeta_engine.regular_factor_path(grid, log_n, max_refine=max_refine)

        def powers(xs):
            logs = rho_path.log_at(xs) + a_path.log_at(xs)
            return np.exp(alpha * logs)

    def integrand(xs):
        xs = np.asarray(xs, dtype=np.float64)
        return f.eval_fhat(xs) * powers(xs) * h_at(xs)

    res, l1 = integrate_adaptive(
        integrand, -half, half, 0.5 * tol, min_panels=min_panels, max_panels=max_panels
    )
    # uniform h uncertainty converts to an additive bound via the L1 mass
    h_floor = max(float(np.min(np.abs(cheb.chebval(np.linspace(-1, 1, 65), h_coeffs)))), 1e-9)
    tail = h_unc * l1 / h_floor
    return QuadResult(res.value, res.quad_error, tail, res.node_count)


def log_n_power(alpha: complex, N: int) -> complex:
    """(log N)^alpha := exp(alpha log log N), the real-positive branch."""
    return complex(np.exp(alpha * math.log(math.log(N))))


@dataclass(frozen=True)
class Theorem2Row:
    params: SumParams
    s_exact: complex
    c_f: complex
    log_n_pow: complex
    e_measured: float
    envelope: float
    s_quad_error: float
    c_quad_error: float


def predicted_envelope(alpha: complex, eta: float, N: int) -> float:
    """The error-term shape (log N)^{1-eta}, times (log log N)^{2 Re alpha/3}
    when Re alpha >= 0."""
    ln = math.log(N)
    shape = ln ** (1.0 - eta)
    if alpha.real >= 0:
        shape *= max(math.log(ln), 1.0) ** (2.0 * alpha.real / 3.0)
    return shape


def theorem2_report(params_list, f: TestFunction, tol: float = 1e-6) -> list:
    """For each (alpha,k,N): the exact integral S, the main term
    C_f (log N)^alpha, and the measured relative error E = S/M - 1 next to
    its predicted envelope shape."""
    rows = []
    for params in params_list:
        s_res = exact_integral(params, f, tol)
        c_res = main_term(params, f, tol)
        pw = log_n_power(params.alpha, params.N)
        m = c_res.value * pw
        e = abs(s_res.value / m - 1.0) if m != 0 else math.inf
        rows.append(
            Theorem2Row(
                params,
                s_res.value,
                c_res.value,
                pw,
                e,
                predicted_envelope(params.alpha, f.eta, params.N),
                s_res.quad_error + s_res.tail_bound,
                c_res.quad_error + c_res.tail_bound,
            )
        )
    return rows


@dataclass(frozen=True)
class TenenbaumRow:
    N: int
    max_rel_err: float
    argmax_tau: float
    l_eps: float


def tenenbaum_check(N_values, tau_grid, eps: float = 0.1) -> list:
    """Per N, the worst relative error over the tau grid of

        zeta_N(1+i tau)  vs  zeta(s)(s-1) (log N) rhohat(i tau log N),

    together with L_eps(N) = exp((log N)^{3/5-eps}), the scale on which the
    factorization's error term shrinks."""
    rows = []
    for N in N_values:
        N = int(N)
        if N < 1000:
            raise ValueError("tenenbaum_check expects N >= 1000")
        primes = sieve_primes(N)
        log_n = math.log(N)
        taus = np.asarray(list(tau_grid), dtype=np.float64)
        s_nodes = 1.0 + 1j * taus
        lhs = zeta_partial_values(primes, s_nodes)
        rhs = np.empty_like(lhs)
        for i, tau in enumerate(taus):
            reg = zeta_engine.zeta(complex(s_nodes[i])).regular
            rhs[i] = reg * log_n * dickman.rho_hat(float(tau) * log_n).value
        rel = np.abs(lhs / rhs - 1.0)
        j = int(np.argmax(rel))
        l_eps = math.exp(log_n ** (0.6 - eps))
        rows.append(TenenbaumRow(N, float(rel[j]), float(taus[j]), l_eps))
    return rows


@dataclass(frozen=True)
class ErrorDecomposition:
    """Measured window residual I2 and h_N -> h substitution error E2, each
    next to the predicted decay shape (ratios, not absolute constants)."""

    params: SumParams
    i2_abs: float
    i2_shape: float
    i2_ratio: float
    e2_abs: float
    e2_shape: float
    e2_ratio: float
    full: QuadResult
    restricted: QuadResult


def error_decomposition(
    params: SumParams, f: TestFunction, tol: float = 1e-8
) -> ErrorDecomposition:
    """Split the exact integral at |x| = 3 log N and measure both residuals.

    I2 is the mass outside the window (computed as full minus restricted);
    E2 is the effect of replacing h_{alpha,k,N} by h_{alpha,k} inside the
    main term (the step lemma1_check measures), reported against
    (log N)^{Re alpha - 1} / N.
    """
    _require_transform(f)
    primes = sieve_primes(params.N)
    log_n = params.log_n
    x_max = f.fhat_cutoff
    window = 3.0 * log_n

    def integrand(xs):
        s_nodes = 1.0 + 1j * np.asarray(xs) / log_n
        return f.eval_fhat(xs) * g_values(params, s_nodes, primes)

    full, _ = integrate_adaptive(integrand, -x_max, x_max, 0.5 * tol)
    r = min(window, x_max)
    restricted, _ = integrate_adaptive(integrand, -r, r, 0.5 * tol)
    i2 = abs(full.value - restricted.value)
    if window < x_max:
        i2_note_tail = 0.0
    else:
        i2_note_tail = f.fhat_tail_bound * g_abs_bound(params)
    i2_shape = predicted_envelope(params.alpha, f.eta, params.N)

    # E2 itself is ~ (log N)^{Re a - 1} / N; 1e-7 main terms resolve it amply
    c_inf = main_term(params, f, max(tol, 1e-7))
    c_fin = main_term(params, f, max(tol, 1e-7), h_variant="finite")
    e2 = abs(log_n_power(params.alpha, params.N)) * abs(c_fin.value - c_inf.value)
    e2_shape = log_n ** (params.alpha.real - 1.0) / params.N
    return ErrorDecomposition(
        params,
        i2,
        i2_shape,
        i2 / i2_shape if i2_shape > 0 else math.inf,
        e2,
        e2_shape,
        e2 / e2_shape if e2_shape > 0 else math.inf,
        QuadResult(full.value, full.quad_error, i2_note_tail, full.node_count),
        restricted,
    )


def F_weight(
    f: TestFunction, alpha: complex, x: float, rho_path: BranchedPath | None = None
):
    """fhat(x) * rhohat(ix)^alpha with the module-standard branch: the Fourier
    side of the alpha-fold Dickman smoothing of f."""
    _require_transform(f)
    x = float(x)
    if rho_path is None:
        span = max(abs(x), 1.0) + 1.0
        rho_path = dickman.rho_hat_path(np.linspace(-span, span, 65))
    return complex(
        np.complex128(f.eval_fhat(x)) * np.exp(alpha * rho_path.log_at(x))
    )
