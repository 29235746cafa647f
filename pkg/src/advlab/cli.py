"""
Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid input data (or unwritable
output), 3 LP solver failure or uncertified bound.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .adversary import BscFlip, Confuser, StrongComposite
from .bounds import curve_emit, erasure_curve, strong_adversary_upper
from .codespace import (
    Code,
    CodeFormatError,
    concentration_tail,
    distance_distribution,
    dual_distribution,
    full_space,
    hamming74,
    mass_beyond,
    parity_code,
    plotkin_average,
    pless_moment,
    random_code,
    read_code,
    repetition_code,
    write_code,
)
from .lp import build_classical_lp, build_skew_lp, solve_lp, verify_certificate
from .simulator import DEFAULT_EPSILONS, default_workers, run_trials, weak_limit_check

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SOLVER = 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _frac(x: Fraction) -> dict:
    return {"exact": str(x), "value": float(x)}


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, newline="\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def _load(path: str) -> Code:
    try:
        return read_code(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except CodeFormatError as exc:
        raise DataError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args) -> int:
    kind = args.kind
    n = args.n
    if kind == "hamming74":
        if n not in (None, 7):
            raise UsageError("hamming74 has length 7")
        code = hamming74()
    else:
        if n is None or n < 1:
            raise UsageError(f"{kind} needs --n >= 1")
        if kind in ("full", "parity") and n > 20:
            raise UsageError(f"{kind} codes are limited to n <= 20")
        if kind == "full":
            code = full_space(n)
        elif kind == "repetition":
            code = repetition_code(n)
        elif kind == "parity":
            code = parity_code(n)
        else:
            if args.M is None:
                raise UsageError("random needs --M")
            try:
                code = random_code(n, args.M, args.seed)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
    comment = f"advlab gen {kind} n={code.n} M={code.M}"
    if kind == "random":
        comment += f" seed={args.seed}"
    try:
        write_code(code, args.out, comment=comment)
    except OSError as exc:
        raise DataError(f"cannot write {args.out}: {exc}") from exc
    return 0


# ---------------------------------------------------------------------------
# analyze


def analyze_report(code: Code, ps=(), eps=None) -> dict:
    dist = distance_distribution(code)
    dual = dual_distribution(dist)
    pless = pless_moment(dist, 2, dual)
    report = {
        "n": code.n,
        "M": code.M,
        "distance_distribution": [str(a) for a in dist.a],
        "dual_distribution": [str(b) for b in dual.b],
        "dual_distance": dual.dual_distance,
        "plotkin_average": _frac(plotkin_average(dist)),
        "pless_r2": {
            "lhs": _frac(pless.lhs),
            "rhs": _frac(pless.rhs),
            "applies": pless.applies,
            "equal": pless.lhs == pless.rhs,
        },
        "mass_beyond": {},
    }
    for p in ps:
        L = mass_beyond(dist, p)
        report["mass_beyond"][repr(p)] = {"L": _frac(L), "ratio": _frac(L / code.M)}
    if eps is not None:
        ct = concentration_tail(dist, eps)
        report["concentration_tail"] = {
            "epsilon": eps,
            "exact_tail": _frac(ct.exact_tail),
            "chebyshev_bound": _frac(ct.chebyshev_bound),
        }
    return report


def _analyze_text(r: dict) -> str:
    lines = [
        f"n = {r['n']}, M = {r['M']}",
        "A_i      : " + " ".join(r["distance_distribution"]),
        "A_perp_i : " + " ".join(r["dual_distribution"]),
        f"dual distance    : {r['dual_distance']}",
        f"plotkin average  : {r['plotkin_average']['exact']} (n/2 = {Fraction(r['n'], 2)})",
        "pless r=2        : lhs {} rhs {} applies={}".format(
            r["pless_r2"]["lhs"]["exact"], r["pless_r2"]["rhs"]["exact"], r["pless_r2"]["applies"]
        ),
    ]
    for p, v in r["mass_beyond"].items():
        lines.append(f"mass beyond 2pn, p={p}: L = {v['L']['exact']}, L/M = {v['ratio']['value']:.6f}")
    if "concentration_tail" in r:
        ct = r["concentration_tail"]
        lines.append(
            f"tail eps={ct['epsilon']}: {ct['exact_tail']['exact']} <= {ct['chebyshev_bound']['value']:.6f}?"
        )
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    code = _load(args.code)
    for p in args.p:
        if not 0 <= p <= 1:
            raise UsageError("--p must lie in [0, 1]")
    if args.epsilon is not None and args.epsilon <= 0:
        raise UsageError("--epsilon must be positive")
    report = analyze_report(code, args.p, args.epsilon)
    text = json.dumps(report, indent=2) + "\n" if args.json else _analyze_text(report)
    if args.emit:
        try:
            write_code(code, args.emit)
        except OSError as exc:
            raise DataError(f"cannot write {args.emit}: {exc}") from exc
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if args.p is not None and not 0 <= args.p <= 1:
        raise UsageError("--p must lie in [0, 1]")
    if not 0 < args.c < 1:
        raise UsageError("--c must lie in (0, 1)")
    if any(e <= 0 for e in args.epsilon or ()):
        raise UsageError("--epsilon values must be positive")
    if args.adversary in ("bsc", "strong") and args.p is None:
        raise UsageError(f"--adversary {args.adversary} needs --p")
    code = _load(args.code)
    if args.adversary == "bsc":
        kind = BscFlip(args.p)
    elif args.adversary == "confuser":
        kind = Confuser(0.25 if args.p is None else args.p)
    else:
        kind = StrongComposite(args.p, args.c)
    cap = default_workers()
    if args.workers is not None and args.workers < 1:
        raise UsageError("--workers must be positive")
    workers = min(args.workers or cap, cap)
    epsilons = tuple(args.epsilon) if args.epsilon else DEFAULT_EPSILONS
    report = run_trials(code, kind, args.trials, args.seed, epsilons, workers=workers)
    out = report.as_dict()
    check = weak_limit_check(report, report.p)
    out["weak_limit"] = {"ok": check.ok, "margin": check.margin, "stderr": check.stderr}
    text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    if args.histogram_plot:
        from .plotting import plot_weight_histogram

        plot_weight_histogram(list(report.weight_histogram), code.n, report.p, args.histogram_plot)
    return 0


# ---------------------------------------------------------------------------
# bounds


def cmd_bounds(args) -> int:
    if not 0 < args.grid <= 0.5:
        raise UsageError("--grid must lie in (0, 1/2]")
    curve = curve_emit(args.grid)
    _write_text(args.out, "\n".join(curve.csv_rows()) + "\n")
    erasure_path = args.erasure_out
    if erasure_path is None:
        out = Path(args.out)
        erasure_path = str(out.with_name(out.stem + "_erasure" + (out.suffix or ".csv")))
    _write_text(erasure_path, "\n".join(erasure_curve(args.grid)) + "\n")
    if args.svg:
        from .plotting import plot_bound_curve

        try:
            plot_bound_curve(curve, args.svg)
        except OSError as exc:
            raise DataError(f"cannot write {args.svg}: {exc}") from exc
    summary = {
        "rows": len(curve.grid),
        "knee_gap": curve.knee_gap,
        "nonincreasing_above_knee": curve.nonincreasing_above_knee,
        "csv": args.out,
        "erasure_csv": erasure_path,
    }
    if args.svg:
        summary["figure"] = args.svg
    sys.stdout.write(json.dumps(summary) + "\n")
    return 0


# ---------------------------------------------------------------------------
# lp


def lp_report(args) -> dict:
    try:
        if args.classical:
            if args.d is None:
                raise UsageError("--classical needs --d")
            problem = build_classical_lp(args.n, args.d)
        else:
            if args.p is None or args.c is None:
                raise UsageError("skew mode needs --p and --c")
            problem = build_skew_lp(args.n, args.p, args.c)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    sol = solve_lp(problem, args.tol)
    cert = verify_certificate(sol, problem, args.exact_tol) if sol.status == "optimal" else None
    valid = cert is not None and cert.valid
    bound = float(cert.recomputed_bound) if valid else None
    report = {
        "mode": "classical" if args.classical else "skew",
        "n": args.n,
        "status": sol.status,
        "bound": bound,
        "rate": math.log2(bound) / args.n if bound and bound > 0 else None,
        "beta": float(sol.beta),
        "beta_positive": sol.beta_positive,
        "objective": sol.objective,
        "exact": sol.exact,
        "certificate_valid": valid,
        "certificate_issues": list(cert.reasons) if cert is not None else [],
        "f_coeffs": [float(f) for f in sol.f_coeffs],
        "closed_form_comparison": None,
    }
    if args.classical:
        report["d"] = args.d
    else:
        report.update({"p": args.p, "c": args.c, "t": problem.t})
        report["closed_form_comparison"] = strong_adversary_upper(args.p)
    return report


def cmd_lp(args) -> int:
    if args.n is None or args.n < 1:
        raise UsageError("--n is required")
    report = lp_report(args)
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    if report["status"] != "optimal":
        return EXIT_SOLVER
    if not report["certificate_valid"]:
        sys.stderr.write("advlab lp: optimum not certified: " + "; ".join(report["certificate_issues"]) + "\n")
        return EXIT_SOLVER
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="advlab", description="Memoryless adversarial channel laboratory.")
    parser.add_argument("--version", action="version", version=f"advlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a code file")
    g.add_argument("kind", choices=["full", "repetition", "parity", "hamming74", "random"])
    g.add_argument("--n", type=int)
    g.add_argument("--M", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="distance/dual distributions and related checks")
    a.add_argument("code")
    a.add_argument("--json", action="store_true")
    a.add_argument("--p", type=float, action="append", default=[], help="report mass beyond 2pn (repeatable)")
    a.add_argument("--epsilon", type=float, help="report the concentration tail at this epsilon")
    a.add_argument("--emit", help="rewrite the parsed code to this path")
    a.add_argument("-o", "--out")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="Monte Carlo error-probability estimate")
    s.add_argument("code")
    s.add_argument("--adversary", choices=["bsc", "confuser", "strong"], required=True)
    s.add_argument("--p", type=float)
    s.add_argument("--c", type=float, default=0.1)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--epsilon", type=float, action="append")
    s.add_argument("--workers", type=int, help="worker processes (capped by ADVLAB_THREADS)")
    s.add_argument("--histogram-plot", help="render the error-weight histogram to this image file")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bounds", help="capacity bound curves as CSV (and a figure)")
    b.add_argument("--grid", type=float, default=0.001)
    b.add_argument("-o", "--out", required=True)
    b.add_argument("--erasure-out", help="erasure curve CSV (default: <out>_erasure.csv)")
    b.add_argument("--svg", help="render the figure to this file (format from the extension)")
    b.set_defaults(func=cmd_bounds)

    lp = sub.add_parser("lp", help="skew or classical LP bound with certificate")
    lp.add_argument("--classical", action="store_true")
    lp.add_argument("--n", type=int)
    lp.add_argument("--d", type=int)
    lp.add_argument("--p", type=float)
    lp.add_argument("--c", type=float)
    lp.add_argument("--tol", type=float, default=1e-9)
    lp.add_argument("--exact-tol", type=float, default=1e-8)
    lp.add_argument("-o", "--out")
    lp.set_defaults(func=cmd_lp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"advlab {args.command}: {exc}\n")
        return EXIT_USAGE
    except DataError as exc:
        sys.stderr.write(f"advlab {args.command}: {exc}\n")
        return EXIT_DATA


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
