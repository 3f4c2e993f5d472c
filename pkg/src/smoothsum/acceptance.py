"""The acceptance gate.

Each criterion is a function returning a CheckResult with a small result
table; the CLI `verify-all` subcommand and tests/test_acceptance.py both run
these, so the gate is a single source of truth.  Criteria with a stated
runtime budget fail when they exceed it.

Levels: "desk" runs every criterion at its stated scale; "quick" trims the
N ladders and the heaviest product cutoffs for smoke runs (identical code
paths, smaller inputs).
"""

import cmath
import math
import time
from dataclasses import dataclass

import numpy as np

from . import dickman, zeta_engine
from .asymptotic import (
    exact_integral,
    main_term,
    make_gaussian,
    make_test_constant,
    tenenbaum_check,
    theorem2_report,
)
from .cache import fmt_float
from .dickman import EXP_EULER_GAMMA
from .errors import SingularFactor
from .euler_products import (
    g_product,
    h_finite,
    h_infinite,
    lemma1_check,
    zeta_partial,
)
from .arith_core import sieve_primes
from .oracle import brute_S
from .params import SumParams


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    elapsed: float
    header: tuple
    rows: list

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} criterion {self.criterion} [{self.name}] ({self.elapsed:.1f}s): {self.detail}"


def _fmt(v) -> str:
    if isinstance(v, complex):
        return f"{fmt_float(v.real)}{'+' if v.imag >= 0 else '-'}{fmt_float(abs(v.imag))}j"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def check_oracle_equivalence(level: str, threads: int) -> CheckResult:
    """1. exact_integral agrees with brute_S within the stated certificates."""
    t0 = time.time()
    f = make_gaussian(1, 0.4)
    rows, ok = [], True
    for alpha in (0, 1, -1, 0.5 + 0.5j):
        for k in (2, 3):
            for N in (10, 30):
                p = SumParams(alpha, k, N)
                ex = exact_integral(p, f, 1e-7)
                br = brute_S(p, f, threads=threads)
                gap = abs(ex.value - br.value)
                bound = ex.quad_error + ex.tail_bound + br.tail_certificate
                good = (
                    gap <= bound
                    and ex.quad_error <= 1e-7
                    and ex.tail_bound <= 1e-7
                    and br.tail_certificate <= 1e-7
                )
                ok = ok and good
                rows.append(
                    (alpha, k, N, gap, ex.quad_error, ex.tail_bound, br.tail_certificate, good)
                )
    elapsed = time.time() - t0
    ok = ok and elapsed < 120.0
    worst = max(r[3] for r in rows)
    return CheckResult(
        1,
        "oracle-equivalence",
        ok,
        f"16 parameter combinations, worst |exact-brute| = {worst:.2e}",
        elapsed,
        ("alpha", "k", "N", "gap", "quad_error", "tail_bound", "tail_certificate", "ok"),
        rows,
    )


def check_product_identity(level: str, threads: int) -> CheckResult:
    """2. log g = alpha log zeta_N + log h factorwise, and brute_S(f=1) equals
    the closed-form product."""
    t0 = time.time()
    rng = np.random.default_rng(20260809)
    worst_ident = 0.0
    rows = []
    n_pts = 100
    drawn = 0
    while drawn < n_pts:
        alpha = complex(3.0 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random()))
        tau = rng.uniform(-3.0, 3.0)
        N = int(rng.choice([100, 1000, 10000]))
        k = int(rng.integers(2, 5))
        s = 1.0 + 1j * tau
        params = SumParams(alpha, k, N)
        try:
            lg = g_product(params, s).log_value
            lz = zeta_partial(sieve_primes(N), s).log_value
            lh = h_finite(params, s).log_value
        except SingularFactor:
            continue  # measure-zero draw; redraw deterministically
        worst_ident = max(worst_ident, abs(lg - alpha * lz - lh))
        drawn += 1
    rows.append(("identity_points", n_pts, worst_ident, worst_ident <= 1e-10))

    f1 = make_test_constant()
    worst_brute = 0.0
    for alpha, k, N in ((1, 2, 30), (0.5 + 0.5j, 3, 30), (2, 4, 13), (-1, 2, 61)):
        p = SumParams(alpha, k, N)
        br = brute_S(p, f1, math.inf, threads=threads)
        g = g_product(p, 1.0)
        rel = abs(br.value - g.value) / abs(g.value)
        worst_brute = max(worst_brute, rel)
        rows.append((f"brute_vs_g a={alpha} k={k} N={N}", br.terms_used, rel, rel <= 1e-12))
    ok = worst_ident <= 1e-10 and worst_brute <= 1e-12
    return CheckResult(
        2,
        "product-identity",
        ok,
        f"identity residual {worst_ident:.2e} (<=1e-10); brute vs product rel {worst_brute:.2e} (<=1e-12)",
        time.time() - t0,
        ("case", "count", "residual", "ok"),
        rows,
    )


def _expint_cf(z: complex, tol: float = 1e-14, max_iter: int = 600) -> complex:
    """E1(z) by the modified-Lentz continued fraction: the independent oracle
    for the exponential-integral identity."""
    tiny = 1e-300
    b = z + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter):
        a = -(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < tol:
            return cmath.exp(-z) * h
    raise RuntimeError("continued fraction did not converge")


def check_golden_values(level: str, threads: int) -> CheckResult:
    """3. Special-function golden values, each against an independent route."""
    t0 = time.time()
    rows = []
    table = dickman.default_table()

    rho2 = abs(table.rho(2.0) - (1.0 - math.log(2.0)))
    rows.append(("rho(2) vs 1-log2", 1e-10, rho2, rho2 <= 1e-10))

    int_route = abs(table.integral() - EXP_EULER_GAMMA)
    rows.append(("rhohat(0) via int rho", 1e-6, int_route, int_route <= 1e-6))
    x = 1e-8
    lim_route = abs(math.exp(-dickman.expint_J(x).real) / x - EXP_EULER_GAMMA)
    rows.append(("rhohat(0) via exp(-J) limit", 1e-6, lim_route, lim_route <= 1e-6))

    pts = [0.5, 1.0, 2.0, 4.0, 7.0, 12.0, 20.0]
    pts += [complex(re, im) for re in (0.5, 2.0, 6.0) for im in (1.0, 5.0, -9.0)]
    pts += [1 + 30j, 0.3 - 2j, 14 + 14j, 25 - 3j]
    worst_j = max(abs(dickman.expint_J(s) - _expint_cf(complex(s))) for s in pts[:20])
    rows.append((f"J vs continued fraction at {len(pts[:20])} pts", 1e-8, worst_j, worst_j <= 1e-8))

    h_tol = 1e-8 if level == "desk" else 1e-6
    worst_h = 0.0
    for k in (2, 3, 4):
        hv = h_infinite(1.0, k, 1.0, h_tol)
        zk = zeta_engine.zeta(float(k)).zeta
        diff = abs(hv.value - 1.0 / zk)
        worst_h = max(worst_h, diff)
        rows.append((f"h_infinite(1,{k},1) vs 1/zeta({k})", 1e-8, diff, diff <= max(1e-8, h_tol)))
    z2 = abs(zeta_engine.zeta(2.0).zeta - math.pi**2 / 6.0)
    rows.append(("zeta(2) vs pi^2/6", 1e-10, z2, z2 <= 1e-10))

    elapsed = time.time() - t0
    ok = all(r[3] for r in rows) and elapsed < 60.0
    return CheckResult(
        3,
        "golden-values",
        ok,
        f"rho/rhohat/J/h/zeta golden checks, worst J residual {worst_j:.2e}",
        elapsed,
        ("check", "tolerance", "residual", "ok"),
        rows,
    )


def check_tenenbaum(level: str, threads: int) -> CheckResult:
    """4. The partial-zeta factorization error decreases along the N ladder
    and is <= 0.1 at the top."""
    t0 = time.time()
    ladder = [10**3, 10**4, 10**5, 10**6] if level == "desk" else [10**3, 10**4]
    taus = np.linspace(-3.0, 3.0, 25)
    rep = tenenbaum_check(ladder, taus)
    errs = [r.max_rel_err for r in rep]
    decreasing = all(errs[i] > errs[i + 1] for i in range(len(errs) - 1))
    ok = decreasing and errs[-1] <= 0.1
    elapsed = time.time() - t0
    ok = ok and elapsed < 300.0
    rows = [(r.N, r.max_rel_err, r.argmax_tau, r.l_eps) for r in rep]
    return CheckResult(
        4,
        "tenenbaum-lemma",
        ok,
        f"max rel errors {['%.2e' % e for e in errs]}, decreasing={decreasing}",
        elapsed,
        ("N", "max_rel_err", "argmax_tau", "L_eps"),
        rows,
    )


def check_lemma1(level: str, threads: int) -> CheckResult:
    """5. |h_N/h - 1| shrinks by >= 8x from N=10^3 to 10^4."""
    t0 = time.time()
    taus = np.linspace(-3.0, 3.0, 25)
    rows, ok = [], True
    for alpha in (1.0, 0.5 + 0.5j):
        rep = lemma1_check(alpha, 2, [10**3, 10**4], taus)
        ratio = rep.decay_ratios[0]
        good = ratio >= 8.0
        ok = ok and good
        rows.append((alpha, 2, rep.max_errors[0], rep.max_errors[1], ratio, rep.expected_ratios[0], good))
    return CheckResult(
        5,
        "lemma1-trend",
        ok,
        f"decay ratios {[f'{r[4]:.1f}' for r in rows]} (need >= 8, scaling ~13.3)",
        time.time() - t0,
        ("alpha", "k", "err_1e3", "err_1e4", "ratio", "expected_ratio", "ok"),
        rows,
    )


def check_theorem2(level: str, threads: int) -> CheckResult:
    """6. |E measured| strictly decreasing along the N ladder with >= 5x total
    shrink, S computed via the exact integral."""
    t0 = time.time()
    f = make_gaussian(1, 0.4)
    ladder = [10**2, 10**3, 10**4, 10**5] if level == "desk" else [10**2, 10**3]
    rows, ok = [], True
    for alpha, k in ((1, 2), (-1, 2), (0.5 + 0.5j, 3)):
        rep = theorem2_report([SumParams(alpha, k, N) for N in ladder], f, tol=1e-6)
        es = [r.e_measured for r in rep]
        decreasing = all(es[i] > es[i + 1] for i in range(len(es) - 1))
        shrink = es[-1] <= es[0] / 5.0 if level == "desk" else True
        ok = ok and decreasing and shrink
        for r in rep:
            rows.append(
                (alpha, k, r.params.N, r.s_exact, r.c_f, r.e_measured, r.envelope, decreasing and shrink)
            )
    elapsed = time.time() - t0
    ok = ok and elapsed < 600.0
    return CheckResult(
        6,
        "theorem2-convergence",
        ok,
        f"3 parameter sets over N ladder {ladder}",
        elapsed,
        ("alpha", "k", "N", "S_exact", "C_f", "E_measured", "envelope", "ok"),
        rows,
    )


def check_alpha_zero(level: str, threads: int) -> CheckResult:
    """7. Degenerate alpha = 0: one term, exact value, tiny E."""
    t0 = time.time()
    f = make_gaussian(1, 0.4)
    p = SumParams(0, 2, 100)
    br = brute_S(p, f, threads=threads)
    f0 = complex(np.complex128(f.eval_f(0.0)))
    exact_one_term = br.terms_used == 1 and br.value == f0
    rep = theorem2_report([p], f, tol=1e-7)
    e = rep[0].e_measured
    ok = exact_one_term and e <= 1e-6
    rows = [
        ("brute single term", br.terms_used, abs(br.value - f0), exact_one_term),
        ("theorem2 |E|", 1, e, e <= 1e-6),
    ]
    return CheckResult(
        7,
        "alpha-zero",
        ok,
        f"brute = f(0) exactly ({exact_one_term}), |E| = {e:.2e} <= 1e-6",
        time.time() - t0,
        ("check", "terms", "residual", "ok"),
        rows,
    )


def check_vinogradov_korobov(level: str, threads: int) -> CheckResult:
    """8. |zeta(1+it)| <= 76.2 (log|t|)^{2/3} at the stated points."""
    t0 = time.time()
    rows, ok = [], True
    for t in (3.0, 10.0, 1e3, 1e6):
        r = zeta_engine.vk_check(t)
        ok = ok and r.passed
        rows.append((t, r.zeta_abs, r.bound, r.passed))
    return CheckResult(
        8,
        "vinogradov-korobov",
        ok,
        "bound holds at t in {3, 10, 1e3, 1e6}",
        time.time() - t0,
        ("t", "zeta_abs", "bound", "ok"),
        rows,
    )


def check_branch_robustness(level: str, threads: int) -> CheckResult:
    """9. Branched powers equal direct integer powers; node doubling moves
    C_f by at most the reported quadrature error."""
    t0 = time.time()
    f = make_gaussian(1, 0.4)
    rows, ok = [], True
    for alpha in (1, 2):
        p = SumParams(alpha, 2, 1000)
        a = main_term(p, f, 1e-9, h_tol=1e-7)
        b = main_term(p, f, 1e-9, h_tol=1e-7, use_integer_powers=True)
        c = main_term(p, f, 1e-9, h_tol=1e-7, min_panels=16)
        route_gap = abs(a.value - b.value)
        node_move = abs(a.value - c.value)
        good = route_gap <= 1e-9 and node_move <= a.quad_error
        ok = ok and good
        rows.append((alpha, route_gap, node_move, a.quad_error, good))
    return CheckResult(
        9,
        "branch-robustness",
        ok,
        f"route gaps {[f'{r[1]:.1e}' for r in rows]} (<=1e-9); node-doubling within quad_error",
        time.time() - t0,
        ("alpha", "route_gap", "node_doubling_move", "quad_error", "ok"),
        rows,
    )


CRITERIA = (
    check_oracle_equivalence,
    check_product_identity,
    check_golden_values,
    check_tenenbaum,
    check_lemma1,
    check_theorem2,
    check_alpha_zero,
    check_vinogradov_korobov,
    check_branch_robustness,
)


def run_criteria(level: str = "desk", threads: int = 1) -> list:
    """Run criteria 1-9 (criterion 10, byte-level determinism, compares two
    invocations of this function and lives in the CLI/tests)."""
    if level not in ("desk", "quick"):
        raise ValueError("level must be 'desk' or 'quick'")
    return [fn(level, threads) for fn in CRITERIA]


def render_tables(results) -> dict:
    """CSV bodies per criterion (no metadata header: these are the
    determinism-comparable bytes)."""
    out = {}
    for res in results:
        lines = [",".join(res.header)]
        for row in res.rows:
            lines.append(",".join(_fmt(v) for v in row))
        out[f"criterion_{res.criterion:02d}.csv"] = "\n".join(lines) + "\n"
    # no timings in the table bodies: they are the determinism-compared bytes
    summary = ["criterion,name,passed,detail"]
    for res in results:
        detail = res.detail.replace(",", ";")
        summary.append(f"{res.criterion},{res.name},{int(res.passed)},{detail}")
    out["summary.csv"] = "\n".join(summary) + "\n"
    return out
