"""Batch experiment runner.

Every subcommand validates its configuration up front (exit 2 on bad
config), runs the computation (exit 3 on a computational error, with the
error class named), and writes tables with a `#`-prefixed metadata header
(config hash, version, timestamp).  Bodies below the header are
byte-reproducible for identical configs at any thread count; `verify-all`
runs the acceptance gate and exits 1 on any failing criterion.

Complex values on the command line are `re,im` pairs (`--alpha 1,0`); N
ladders are comma lists (`--N 100,1000`); test functions are
`gaussian:mu,sigma[,eta]`.  A `--config FILE` of `key=value` lines mirrors
the flags exactly (flags given on the command line win).
"""

import argparse
import hashlib
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, acceptance, dickman, zeta_engine
from .asymptotic import (
    error_decomposition,
    exact_integral,
    main_term,
    make_gaussian,
    tenenbaum_check,
    theorem2_report,
)
from .arith_core import DEFAULT_COUNT_CAP, sieve_primes
from .cache import fmt_float
from .errors import SmoothsumError
from .euler_products import (
    DEFAULT_PRIME_CAP,
    g_product,
    h_finite,
    lemma1_check,
    zeta_partial,
)
from .oracle import brute_S
from .params import SumParams


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected re or re,im - got {text!r}")


def _parse_int_list(text: str) -> tuple:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma list of integers: {exc}")


def _parse_grid(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected min,max,count")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 2 or not hi > lo:
        raise argparse.ArgumentTypeError("grid needs max > min and count >= 2")
    return (lo, hi, n)


def _parse_testfn(text: str):
    name, _, args = text.partition(":")
    if name != "gaussian":
        raise argparse.ArgumentTypeError(
            f"unknown test function {name!r} (supported: gaussian:mu,sigma[,eta])"
        )
    vals = [float(v) for v in args.split(",")] if args else []
    if len(vals) == 2:
        return make_gaussian(vals[0], vals[1])
    if len(vals) == 3:
        return make_gaussian(vals[0], vals[1], eta=vals[2])
    raise argparse.ArgumentTypeError("gaussian needs mu,sigma or mu,sigma,eta")


def _fmt_value(v) -> str:
    if isinstance(v, complex):
        return f"{fmt_float(v.real)}{'+' if v.imag >= 0 else '-'}{fmt_float(abs(v.imag))}j"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def _config_items(args: argparse.Namespace) -> list:
    """The resolved configuration in the same key=value form the flags and
    --config files use, so emit -> parse round-trips exactly."""
    skip = {"func", "config", "out", "f_obj"}
    items = []
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None:
            continue
        if isinstance(val, tuple):
            val = ",".join(str(v) for v in val)
        elif isinstance(val, complex):
            val = f"{val.real:g},{val.imag:g}"
        items.append((key.replace("_", "-"), str(val)))
    return items


def _meta_lines(args: argparse.Namespace) -> list:
    items = _config_items(args)
    canon = "\n".join(f"{k}={v}" for k, v in items)
    digest = hashlib.sha256(canon.encode()).hexdigest()[:16]
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    lines = [f"# smoothsum v{__version__}", f"# config_hash: {digest}", f"# timestamp: {stamp}"]
    lines += [f"# config: {k}={v}" for k, v in items]
    return lines


def _json_meta(args) -> dict:
    return {
        "version": __version__,
        "config": dict(_config_items(args)),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _write_csv(path: Path, args, header, rows) -> None:
    body = [",".join(header)]
    body += [",".join(_fmt_value(v) for v in row) for row in rows]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(_meta_lines(args) + body) + "\n")
    print(f"wrote {path}")


def _write_json(path: Path, args, result: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps({"meta": _json_meta(args), "result": result}, indent=2) + "\n"
    )
    print(f"wrote {path}")


def _write_table(stem: Path, args, header, rows) -> None:
    """Emit a table as CSV or JSON per --format (CSV bodies stay the
    byte-comparable determinism surface)."""
    if getattr(args, "format", "csv") == "json":
        result = {"columns": list(header), "rows": [[_fmt_value(v) for v in row] for row in rows]}
        _write_json(stem.with_suffix(".json"), args, result)
    else:
        _write_csv(stem.with_suffix(".csv"), args, header, rows)


def _write_record(stem: Path, args, result: dict) -> None:
    """Emit a flat record as JSON or a one-row CSV per --format."""
    if getattr(args, "format", "json") == "csv":
        _write_csv(
            stem.with_suffix(".csv"), args, tuple(result.keys()), [tuple(result.values())]
        )
    else:
        _write_json(stem.with_suffix(".json"), args, result)


def _complex_fields(prefix: str, v: complex) -> dict:
    return {f"re_{prefix}": v.real, f"im_{prefix}": v.imag}


# --- subcommand executors ----------------------------------------------------


def _cmd_dickman_table(args) -> int:
    table = dickman.build_rho(args.u_max, args.tol)
    us = np.arange(0.0, args.u_max + 1e-9, args.du)
    rows = [(float(u), float(table.rho(float(u)))) for u in us]
    _write_table(Path(args.out) / "dickman_rho", args, ("u", "rho"), rows)
    xs = np.arange(-args.x_max, args.x_max + 1e-9, args.dx)
    rrows = []
    for x in xs:
        v = dickman.rho_hat(float(x)).value
        rrows.append((float(x), v.real, v.imag))
    _write_table(
        Path(args.out) / "dickman_rhohat", args, ("x", "re_rhohat", "im_rhohat"), rrows
    )
    return 0


def _cmd_zeta_table(args) -> int:
    lo, hi, n = args.tau
    rows = []
    for tau in np.linspace(lo, hi, n):
        v = zeta_engine.zeta(complex(1.0, float(tau)))
        z = v.zeta if tau != 0 else complex(float("nan"), float("nan"))
        rows.append((float(tau), z.real, z.imag, v.regular.real, v.regular.imag, v.method))
    _write_table(
        Path(args.out) / "zeta_line",
        args,
        ("tau", "re_zeta", "im_zeta", "re_regular", "im_regular", "method"),
        rows,
    )
    return 0


def _cmd_products_table(args) -> int:
    params = SumParams(args.alpha, args.k, args.N[0])
    primes = sieve_primes(params.N)
    lo, hi, n = args.tau
    rows = []
    for tau in np.linspace(lo, hi, n):
        s = complex(1.0, float(tau))
        g = g_product(params, s)
        zn = zeta_partial(primes, s)
        zpow = np.exp(params.alpha * zn.log_value)
        h = h_finite(params, s)
        rows.append(
            (float(tau), g.value.real, g.value.imag, zpow.real, zpow.imag,
             h.value.real, h.value.imag)
        )
    _write_table(
        Path(args.out) / "products",
        args,
        ("tau", "re_g", "im_g", "re_zetaN_pow", "im_zetaN_pow", "re_h", "im_h"),
        rows,
    )
    return 0


def _cmd_brute(args) -> int:
    params = SumParams(args.alpha, args.k, args.N[0])
    f = args.f_obj
    cutoff = math.inf if args.u_cutoff == "inf" else (
        float(args.u_cutoff) if args.u_cutoff is not None else None
    )
    res = brute_S(params, f, cutoff, threads=args.threads, count_cap=args.count_cap)
    _write_record(
        Path(args.out) / "brute",
        args,
        {
            **_complex_fields("value", res.value),
            "terms_used": res.terms_used,
            "u_cutoff": res.u_cutoff,
            "tail_certificate": res.tail_certificate,
        },
    )
    return 0


def _cmd_exact(args) -> int:
    params = SumParams(args.alpha, args.k, args.N[0])
    res = exact_integral(params, args.f_obj, args.tol)
    _write_record(
        Path(args.out) / "exact",
        args,
        {
            **_complex_fields("value", res.value),
            "quad_error": res.quad_error,
            "tail_bound": res.tail_bound,
            "node_count": res.node_count,
        },
    )
    return 0


def _cmd_cfactor(args) -> int:
    params = SumParams(args.alpha, args.k, args.N[0])
    res = main_term(
        params,
        args.f_obj,
        args.tol,
        use_integer_powers=args.integer_powers,
        h_variant=args.h_variant,
    )
    _write_record(
        Path(args.out) / "cfactor",
        args,
        {
            **_complex_fields("C_f", res.value),
            "quad_error": res.quad_error,
            "tail_bound": res.tail_bound,
            "node_count": res.node_count,
        },
    )
    return 0


def _cmd_theorem2(args) -> int:
    rows_out = []
    params_list = [SumParams(args.alpha, args.k, n) for n in args.N]
    for r in theorem2_report(params_list, args.f_obj, args.tol):
        rows_out.append(
            (r.params.N, r.s_exact.real, r.s_exact.imag, r.c_f.real, r.c_f.imag,
             r.e_measured, r.envelope)
        )
    _write_table(
        Path(args.out) / "theorem2",
        args,
        ("N", "re_S", "im_S", "re_C_f", "im_C_f", "abs_E_measured", "predicted_envelope"),
        rows_out,
    )
    return 0


def _cmd_tenenbaum(args) -> int:
    lo, hi, n = args.tau
    rows = [
        (r.N, r.max_rel_err, r.argmax_tau, r.l_eps)
        for r in tenenbaum_check(args.N, np.linspace(lo, hi, n), eps=args.eps)
    ]
    _write_table(
        Path(args.out) / "tenenbaum",
        args,
        ("N", "max_rel_err", "argmax_tau", "L_eps"),
        rows,
    )
    return 0


def _cmd_lemma1(args) -> int:
    lo, hi, n = args.tau
    rep = lemma1_check(
        args.alpha, args.k, args.N, np.linspace(lo, hi, n),
        h_tol=args.h_tol, prime_cap=args.prime_cap,
    )
    rows = []
    for i, N in enumerate(rep.n_values):
        ratio = rep.decay_ratios[i] if i < len(rep.decay_ratios) else float("nan")
        expect = rep.expected_ratios[i] if i < len(rep.expected_ratios) else float("nan")
        rows.append((N, rep.max_errors[i], ratio, expect))
    _write_table(
        Path(args.out) / "lemma1",
        args,
        ("N", "max_rel_err", "decay_ratio_to_next", "expected_ratio"),
        rows,
    )
    return 0


def _cmd_errordecomp(args) -> int:
    params = SumParams(args.alpha, args.k, args.N[0])
    d = error_decomposition(params, args.f_obj, args.tol)
    _write_record(
        Path(args.out) / "errordecomp",
        args,
        {
            "i2_abs": d.i2_abs,
            "i2_shape": d.i2_shape,
            "i2_ratio": d.i2_ratio,
            "e2_abs": d.e2_abs,
            "e2_shape": d.e2_shape,
            "e2_ratio": d.e2_ratio,
        },
    )
    return 0


def _cmd_verify_all(args) -> int:
    results = acceptance.run_criteria(args.level, args.threads)
    tables = acceptance.render_tables(results)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = "\n".join(_meta_lines(args)) + "\n"
    for name, body in tables.items():
        (out / name).write_text(meta + body)
    for res in results:
        print(res.line())
    ok = all(r.passed for r in results)
    if args.determinism:
        second = acceptance.render_tables(acceptance.run_criteria(args.level, 8))
        same = second == tables
        print(
            f"{'PASS' if same else 'FAIL'} criterion 10 [determinism]: "
            f"threads 1 vs 8 tables byte-identical: {same}"
        )
        ok = ok and same
    print("verify-all:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


# --- parser ------------------------------------------------------------------


def _add_common(sub, *, f=False, alpha=False, n_list=False, tol=None, tau=None,
                fmt="csv"):
    sub.add_argument("--out", default=".", help="output directory")
    sub.add_argument(
        "--config", default=None,
        help="key=value file mirroring these flags (flags win)",
    )
    if fmt is not None:
        sub.add_argument("--format", choices=("csv", "json"), default=fmt,
                         help="output file format")
    if alpha:
        sub.add_argument("--alpha", type=_parse_complex, required=True,
                         help="complex weight base as re,im")
        sub.add_argument("--k", type=int, required=True, help="k-free order (>= 2)")
    if n_list:
        sub.add_argument("--N", type=_parse_int_list, required=True,
                         help="smoothness bound(s), comma list")
    if f:
        sub.add_argument("--f", required=True,
                         help="test function, e.g. gaussian:1,0.4")
    if tol is not None:
        sub.add_argument("--tol", type=float, default=tol, help="target tolerance")
    if tau is not None:
        sub.add_argument("--tau", type=_parse_grid, default=tau,
                         help="tau grid as min,max,count")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="smoothsum",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    top.add_argument("--version", action="version", version=f"smoothsum {__version__}")
    subs = top.add_subparsers(dest="command", required=True)

    p = subs.add_parser(
        "dickman-table",
        help="tabulate rho and rhohat",
        description="Columns dickman_rho.csv: u, rho.  "
        "Columns dickman_rhohat.csv: x, re_rhohat, im_rhohat.",
    )
    _add_common(p)
    p.add_argument("--u-max", type=float, default=45.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--du", type=float, default=0.25)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--dx", type=float, default=0.25)
    p.set_defaults(func=_cmd_dickman_table)

    p = subs.add_parser(
        "zeta-table",
        help="tabulate zeta on the 1-line",
        description="Columns zeta_line.csv: tau, re_zeta, im_zeta, re_regular, "
        "im_regular, method.  regular is (s-1) zeta(s) at s = 1 + i tau.",
    )
    _add_common(p, tau=(-3.0, 3.0, 61))
    p.set_defaults(func=_cmd_zeta_table)

    p = subs.add_parser(
        "products-table",
        help="tabulate g, zeta_N^alpha, h_N on the 1-line",
        description="Columns products.csv: tau, re_g, im_g, re_zetaN_pow, "
        "im_zetaN_pow, re_h, im_h, at s = 1 + i tau.",
    )
    _add_common(p, alpha=True, n_list=True, tau=(-3.0, 3.0, 61))
    p.set_defaults(func=_cmd_products_table)

    p = subs.add_parser(
        "brute",
        help="brute-force oracle sum (JSON)",
        description="brute.json result fields: re_value, im_value, terms_used, "
        "u_cutoff, tail_certificate.",
    )
    _add_common(p, alpha=True, n_list=True, f=True, fmt="json")
    p.add_argument("--u-cutoff", default=None,
                   help="truncation in u = log n / log N ('inf' sums all terms)")
    p.add_argument("--threads", type=int, default=1,
                   help="subtree workers; results identical at any count")
    p.add_argument("--count-cap", type=int, default=DEFAULT_COUNT_CAP)
    p.set_defaults(func=_cmd_brute)

    p = subs.add_parser(
        "exact",
        help="exact Fourier-integral sum (JSON)",
        description="exact.json result fields: re_value, im_value, quad_error, "
        "tail_bound, node_count.",
    )
    _add_common(p, alpha=True, n_list=True, f=True, tol=1e-7, fmt="json")
    p.set_defaults(func=_cmd_exact)

    p = subs.add_parser(
        "cfactor",
        help="main-term constant C_f (JSON)",
        description="cfactor.json result fields: re_C_f, im_C_f, quad_error, "
        "tail_bound, node_count.",
    )
    _add_common(p, alpha=True, n_list=True, f=True, tol=1e-7, fmt="json")
    p.add_argument("--integer-powers", action="store_true",
                   help="direct integer powers instead of branched logs")
    p.add_argument("--h-variant", choices=("infinite", "finite"), default="infinite")
    p.set_defaults(func=_cmd_cfactor)

    p = subs.add_parser(
        "theorem2",
        help="S vs C_f (log N)^alpha ladder (CSV)",
        description="Columns theorem2.csv: N, re_S, im_S, re_C_f, im_C_f, "
        "abs_E_measured, predicted_envelope.  E = S/(C_f (log N)^alpha) - 1; "
        "the envelope is (log N)^{1-eta} ((log log N)^{2 Re alpha/3} when "
        "Re alpha >= 0).",
    )
    _add_common(p, alpha=True, n_list=True, f=True, tol=1e-6)
    p.set_defaults(func=_cmd_theorem2)

    p = subs.add_parser(
        "tenenbaum",
        help="partial-zeta factorization errors (CSV)",
        description="Columns tenenbaum.csv: N, max_rel_err, argmax_tau, L_eps. "
        "max_rel_err is over the tau grid of |zeta_N/(zeta (s-1) log N "
        "rhohat) - 1|.",
    )
    _add_common(p, n_list=True, tau=(-3.0, 3.0, 25))
    p.add_argument("--eps", type=float, default=0.1, help="epsilon in L_eps(N)")
    p.set_defaults(func=_cmd_tenenbaum)

    p = subs.add_parser(
        "lemma1",
        help="h_N vs h decay measurement (CSV)",
        description="Columns lemma1.csv: N, max_rel_err, decay_ratio_to_next, "
        "expected_ratio (the N log N scaling).",
    )
    _add_common(p, alpha=True, n_list=True, tau=(-3.0, 3.0, 25))
    p.add_argument("--h-tol", type=float, default=1e-7)
    p.add_argument("--prime-cap", type=int, default=DEFAULT_PRIME_CAP)
    p.set_defaults(func=_cmd_lemma1)

    p = subs.add_parser(
        "errordecomp",
        help="window + substitution error report (JSON)",
        description="errordecomp.json result fields: i2_abs, i2_shape, i2_ratio, "
        "e2_abs, e2_shape, e2_ratio.",
    )
    _add_common(p, alpha=True, n_list=True, f=True, tol=1e-8, fmt="json")
    p.set_defaults(func=_cmd_errordecomp)

    p = subs.add_parser(
        "verify-all",
        help="run the acceptance gate",
        description="Writes criterion_NN.csv tables plus summary.csv; prints one "
        "PASS/FAIL line per criterion; exit 1 on any failure.  "
        "--determinism reruns at 8 threads and byte-compares the tables.",
    )
    _add_common(p, fmt=None)
    p.add_argument("--level", choices=("desk", "quick"), default="desk")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--determinism", action="store_true")
    p.set_defaults(func=_cmd_verify_all)
    return top


def _inject_config(argv: list) -> list:
    """Expand `--config FILE` into the equivalent flags (given flags win)."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = Path(argv[i + 1])
    extra = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition("=")
        # --key=value form: values may start with '-' (e.g. tau grids)
        extra.append(f"--{key.strip()}={val.strip()}")
    # subcommand first, then config-derived flags, then explicit flags
    return argv[:1] + extra + argv[1:]


def run(argv) -> int:
    argv = list(argv)
    try:
        argv = _inject_config(argv)
        parser = build_parser()
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        _validate(args)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SmoothsumError as exc:
        print(f"computational error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 3


def _validate(args) -> None:
    if getattr(args, "k", None) is not None and args.k < 2:
        raise ValueError("k must be >= 2")
    for n in getattr(args, "N", ()) or ():
        if n < 2:
            raise ValueError("every N must be >= 2")
    tol = getattr(args, "tol", None)
    if tol is not None and not 0 < tol <= 1e-3:
        raise ValueError("tol must lie in (0, 1e-3]")
    if getattr(args, "threads", 1) < 1:
        raise ValueError("threads must be >= 1")
    if getattr(args, "u_cutoff", None) not in (None, "inf"):
        if float(args.u_cutoff) < 0:
            raise ValueError("u-cutoff must be >= 0")
    if getattr(args, "f", None) is not None:
        try:
            args.f_obj = _parse_testfn(args.f)
        except argparse.ArgumentTypeError as exc:
            raise ValueError(str(exc))


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
