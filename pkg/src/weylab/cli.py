"""Command-line front end: run experiments, emit CSV/JSON reports.

Subcommands wrap the library operations one-to-one.  Outputs are
deterministic: identical (command, flags, seed) produce byte-identical files
regardless of thread count, so the thread count is deliberately absent from
the echoed configuration.  Floats are serialized with 17 significant digits
for exact round-trips.

Exit codes: 0 success, 1 invariant violation, 2 usage error,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import arith, circle, gauss, lpcordoba, moments
from .errors import (
    AliasingError,
    InvariantViolation,
    ResolutionError,
    WorkBudgetError,
)
from .expsum import GridSpec, TrigPoly

SCHEMA_LINE = "# schema=1"
THREADS_ENV = "WEYLAB_THREADS"

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def fmt_float(v: float) -> str:
    return f"{v:.17g}"


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, dict):
        inner = ", ".join(f"{_json_value(str(k))}: {_json_value(x)}" for k, x in v.items())
        return "{" + inner + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if v is None:
        return "null"
    return _json_value(str(v))


class Report:
    """Accumulates header + rows and writes them as CSV or JSON."""

    def __init__(self, command: str, config: dict, header: list[str]):
        self.command = command
        self.config = config
        self.header = header
        self.rows: list[tuple] = []
        self.fit: dict | None = None

    def add(self, *row) -> None:
        if len(row) != len(self.header):
            raise ValueError("row width mismatch")
        self.rows.append(row)

    def _cell(self, v) -> str:
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, (float, np.floating)):
            return fmt_float(float(v))
        return str(v)

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            lines = [SCHEMA_LINE, ",".join(self.header)]
            for row in self.rows:
                lines.append(",".join(self._cell(v) for v in row))
            if self.fit is not None:
                lines.append(
                    "# fit: "
                    + ",".join(f"{k}={self._cell(v)}" for k, v in self.fit.items())
                )
            return "\n".join(lines) + "\n"
        if fmt == "json":
            obj = {
                "command": self.command,
                "config": self.config,
                "rows": [dict(zip(self.header, row)) for row in self.rows],
            }
            if self.fit is not None:
                obj["fit"] = self.fit
            return _json_value(obj) + "\n"
        raise ValueError(f"unknown format {fmt!r}")


def write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from exc


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from exc


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylab", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--work-budget", type=int, default=moments.DEFAULT_WORK_BUDGET)
    common.add_argument("--config", default=None, help="key=value config file")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gauss", parents=[common], help="closed-form magnitude sweep")
    p.add_argument("--qmax", type=int, required=True)

    p = sub.add_parser("moment", parents=[common], help="one norm computation")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--mode", choices=("double", "marginal", "arc"), default="double")
    p.add_argument("--exact", action="store_true", help="exact even-moment count")
    p.add_argument("--x", type=parse_fraction, default=None, help="marginal x (b/q)")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--eps", type=float, default=0.01)

    p = sub.add_parser("norm-scan", parents=[common], help="norms over an N ladder")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--N-list", type=parse_int_list, required=True)
    p.add_argument("--mode", choices=("double", "marginal"), default="double")
    p.add_argument("--x", type=parse_fraction, default=None)
    p.add_argument("--exact", action="store_true")

    p = sub.add_parser("fit", parents=[common], help="fit a growth exponent")
    p.add_argument("--input", required=True, help="norm-scan CSV to fit")
    p.add_argument("--divide-log", action="store_true")

    p = sub.add_parser("arc-check", parents=[common], help="major-arc center law")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.01)

    p = sub.add_parser("totient", parents=[common], help="totient sum asymptotics")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("lp-check", parents=[common], help="dyadic square-function battery")
    p.add_argument("--degree", type=int, default=256)
    p.add_argument("--alpha", type=float, default=2.5)
    p.add_argument("--count", type=int, default=100)

    p = sub.add_parser("cordoba", parents=[common], help="decreasing-coefficient ratio")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument(
        "--coeffs", choices=("constant", "inverse", "inverse-sqrt"), default="constant"
    )

    p = sub.add_parser("levelset", parents=[common], help="level-set fraction scan")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--t-points", type=int, default=None)
    p.add_argument("--x-points", type=int, default=None)
    return parser


def _config_echo(args: argparse.Namespace) -> dict:
    """Semantic parameters only: no threads (outputs must not depend on
    them) and no output path."""
    skip = {"command", "out", "threads", "config", "format"}
    echo = {}
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None:
            continue
        if isinstance(val, Fraction):
            val = str(val)
        echo[key.replace("_", "-")] = val
    return echo


def _resolve_threads(args: argparse.Namespace, file_cfg: dict[str, str]) -> int:
    # config file < flag < environment variable
    threads = 1
    if "threads" in file_cfg:
        threads = int(file_cfg["threads"])
    if args.threads is not None:
        threads = args.threads
    env = os.environ.get(THREADS_ENV)
    if env:
        threads = int(env)
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


# ---------------------------------------------------------------------------
# command bodies: return (report, exit_code)
# ---------------------------------------------------------------------------


def cmd_gauss(args, threads: int) -> tuple[Report, int]:
    report = Report("gauss", _config_echo(args), ["q", "a", "b", "direct_abs", "closed_form", "abs_err"])
    worst = 0.0
    for q, a, b, direct, cf, err in gauss.sweep_rows(args.qmax):
        report.add(q, a, b, direct, cf, err)
        worst = max(worst, err)
    return report, EXIT_OK if worst <= 1e-9 else EXIT_INVARIANT


def _norm_row(report: Report, sample: moments.NormSample) -> None:
    report.add(sample.N, sample.alpha, sample.mode, sample.value, sample.t_step, sample.x_step)


def _one_moment(args, N: int, threads: int) -> moments.NormSample:
    if args.exact:
        if args.alpha not in (4.0, 6.0):
            raise ValueError("--exact requires alpha 4 or 6")
        k = 2 if args.alpha == 4.0 else 3
        value = moments.moment_exact_even(N, k)
        return moments.NormSample(N, args.alpha, moments.MODE_DOUBLE, float(value), 0.0, 0.0)
    if args.mode == "double":
        return moments.moment_quadrature(
            N, args.alpha, threads=threads, work_budget=args.work_budget
        )
    if args.mode == "marginal":
        if args.x is None:
            raise ValueError("marginal mode needs --x")
        return moments.moment_quadrature(
            N, args.alpha, mode="marginal", x=args.x, work_budget=args.work_budget
        )
    if None in (args.q, args.a, args.b):
        raise ValueError("arc mode needs --q, --a and --b")
    arc = circle.MajorArc(circle.FareyFraction(args.a, args.q), args.b, N, args.eps)
    return moments.moment_quadrature(N, args.alpha, mode="arc", arc=arc, work_budget=args.work_budget)


def cmd_moment(args, threads: int) -> tuple[Report, int]:
    report = Report("moment", _config_echo(args), ["N", "alpha", "mode", "value", "t_step", "x_step"])
    _norm_row(report, _one_moment(args, args.N, threads))
    return report, EXIT_OK


def cmd_norm_scan(args, threads: int) -> tuple[Report, int]:
    report = Report("norm-scan", _config_echo(args), ["N", "alpha", "mode", "value", "t_step", "x_step"])
    for N in args.N_list:
        _norm_row(report, _one_moment(args, N, threads))
    return report, EXIT_OK


def cmd_fit(args, threads: int) -> tuple[Report, int]:
    samples = []
    with open(args.input, encoding="utf-8") as fh:
        header: list[str] | None = None
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
                continue
            rec = dict(zip(header, line.split(",")))
            samples.append(
                moments.NormSample(
                    N=int(rec["N"]),
                    alpha=float(rec["alpha"]),
                    mode=rec["mode"],
                    value=float(rec["value"]),
                    t_step=float(rec["t_step"]),
                    x_step=float(rec["x_step"]),
                )
            )
    fit = moments.fit_exponent(samples, divide_log=args.divide_log)
    report = Report("fit", _config_echo(args), ["N", "alpha", "mode", "value", "t_step", "x_step"])
    for s in samples:
        _norm_row(report, s)
    report.fit = {
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "max_residual": fit.max_residual,
        "with_log_factor": fit.with_log_factor,
    }
    return report, EXIT_OK


def cmd_arc_check(args, threads: int) -> tuple[Report, int]:
    report = Report(
        "arc-check",
        _config_echo(args),
        ["q", "a", "b", "N", "measured", "predicted", "ratio"],
    )
    arcs = circle.enumerate_major_arcs(args.N, args.eps, args.qmax, admissible_only=True)
    code = EXIT_OK
    try:
        rows = circle.center_law_sweep(arcs)
    except InvariantViolation:
        return report, EXIT_INVARIANT
    for arc, chk in rows:
        report.add(arc.q, arc.a, arc.b, arc.N, chk.measured, chk.predicted, chk.ratio)
    return report, code


def cmd_totient(args, threads: int) -> tuple[Report, int]:
    est = arith.totient_sum_compare(args.N, args.beta)
    report = Report(
        "totient",
        _config_echo(args),
        ["N", "beta", "exact", "main_terms", "error_bound_scale", "ratio"],
    )
    report.add(est.N, est.beta, est.exact, est.main_terms, est.error_bound_scale, est.ratio)
    return report, EXIT_OK


def random_poly(rng: np.random.Generator, degree: int) -> TrigPoly:
    """Random polynomial with full spectrum [-degree, degree], unit-scale
    complex Gaussian coefficients."""
    freqs = np.arange(-degree, degree + 1)
    coeffs = rng.standard_normal(len(freqs)) + 1j * rng.standard_normal(len(freqs))
    return TrigPoly({int(n): complex(c) for n, c in zip(freqs, coeffs)})


def cmd_lp_check(args, threads: int) -> tuple[Report, int]:
    report = Report(
        "lp-check",
        _config_echo(args),
        ["poly_id", "degree", "alpha", "norm_alpha", "square_fn_norm", "ratio", "reassembly_exact"],
    )
    rng = np.random.default_rng(args.seed)
    grid = GridSpec(max(4096, 4 * args.degree))
    code = EXIT_OK
    for i in range(args.count):
        deg = int(rng.integers(1, args.degree + 1))
        P = random_poly(rng, deg)
        blocks = lpcordoba.dyadic_split(P)
        exact = blocks.reassemble() == P
        sf = lpcordoba.square_function_norm(P, args.alpha, grid)
        na = lpcordoba.poly_norm(P, args.alpha, grid)
        l2_gap = abs(lpcordoba.square_function_norm(P, 2.0, grid) - lpcordoba.poly_norm(P, 2.0, grid))
        if not exact or l2_gap > 1e-9 * max(1.0, na):
            code = EXIT_INVARIANT
        report.add(i, deg, args.alpha, na, sf, sf / na, exact)
    return report, code


def cmd_cordoba(args, threads: int) -> tuple[Report, int]:
    k = np.arange(1, args.N + 1, dtype=np.float64)
    if args.coeffs == "constant":
        a = np.ones(args.N)
    elif args.coeffs == "inverse":
        a = 1.0 / k
    else:
        a = 1.0 / np.sqrt(k)
    ratio = lpcordoba.cordoba_ratio(a, args.ell, args.alpha)
    report = Report("cordoba", _config_echo(args), ["N", "alpha", "ell", "coeffs", "ratio"])
    report.add(args.N, args.alpha, args.ell, args.coeffs, ratio)
    return report, EXIT_OK


def cmd_levelset(args, threads: int) -> tuple[Report, int]:
    t_points = args.t_points if args.t_points else 8 * args.N * args.N
    x_points = args.x_points if args.x_points else 8 * args.N
    frac_in = moments.level_set_fraction(
        args.N,
        args.a,
        args.b,
        t_points=t_points,
        x_points=x_points,
        threads=threads,
        work_budget=args.work_budget,
    )
    report = Report(
        "levelset", _config_echo(args), ["N", "a", "b", "fraction", "t_points", "x_points"]
    )
    report.add(args.N, args.a, args.b, frac_in, t_points, x_points)
    return report, EXIT_OK


COMMANDS = {
    "gauss": cmd_gauss,
    "moment": cmd_moment,
    "norm-scan": cmd_norm_scan,
    "fit": cmd_fit,
    "arc-check": cmd_arc_check,
    "totient": cmd_totient,
    "lp-check": cmd_lp_check,
    "cordoba": cmd_cordoba,
    "levelset": cmd_levelset,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_cfg = _read_config_file(args.config) if args.config else {}
        if "work_budget" in file_cfg and args.work_budget == moments.DEFAULT_WORK_BUDGET:
            args.work_budget = int(file_cfg["work_budget"])
        if "seed" in file_cfg and args.seed == 0:
            args.seed = int(file_cfg["seed"])
        threads = _resolve_threads(args, file_cfg)
        report, code = COMMANDS[args.command](args, threads)
        write_output(report.render(args.format), args.out)
        return code
    except WorkBudgetError as exc:
        print(f"error: budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, ResolutionError, AliasingError, OSError) as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"error: invariant: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
