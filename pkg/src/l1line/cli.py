"""Command line surface: fit, path, sweep, gen, verify, bench.

Report-producing subcommands (path, sweep) write their table or JSON to
--output and render a matching PNG figure next to it unless --no-plot is
given.  Exit codes: 0 success, 1 usage or input error, 2 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .core import DataMatrix, FittedLine, SolutionPath
from .datagen import gen_line_data, gen_outlier_data
from .fit import fit_line
from .io import read_matrix, write_matrix, write_path, write_sweep
from .oracle import sweep_validate
from .parallel import resolve_threads
from .path import solution_path
from .subspace import discordance, fit_subspace, l0_fraction

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main owns exit codes."""

    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _fmt_vec(v) -> str:
    return "[" + ", ".join(_fmt(float(x)) for x in v) + "]"


def _check_lam(lam: float) -> float:
    if not math.isfinite(lam) or lam < 0.0:
        raise _UsageError("penalty weight must be finite and nonnegative")
    return lam


def _load_data(args) -> DataMatrix:
    return read_matrix(args.data, has_header=args.header)


def _line_dict(line: FittedLine) -> dict:
    return {
        "preserved": line.preserved,
        "v": [float(x) for x in line.v],
        "lam": line.lam,
        "error": line.error,
        "penalty_norm": line.penalty_norm,
        "objective": line.objective,
    }


def _figure_file(output: str) -> Path:
    return Path(output).with_suffix(".png")


def _load_truth(args) -> np.ndarray | None:
    """Ground-truth direction from --truth, or the <data>.json sidecar."""
    candidate = args.truth if args.truth else args.data + ".json"
    path = Path(candidate)
    if not path.exists():
        if args.truth:
            raise _UsageError(f"truth file not found: {candidate}")
        return None
    with open(path) as fh:
        meta = json.load(fh)
    if "v_true" not in meta:
        raise _UsageError(f"no v_true entry in {candidate}")
    return np.asarray(meta["v_true"], dtype=np.float64)


def cmd_fit(args) -> int:
    lam = _check_lam(args.lam)
    if args.components < 1:
        raise _UsageError("--components must be at least 1")
    data = _load_data(args)
    if args.components == 1:
        lines = [fit_line(data, lam, args.threads)]
        degenerate = False
    else:
        sub = fit_subspace(data, lam, args.components, args.threads)
        lines = list(sub.components)
        degenerate = sub.degenerate
    for t, line in enumerate(lines, 1):
        print(f"component {t}: preserved={line.preserved} "
              f"error={_fmt(line.error)} penalty={_fmt(line.penalty_norm)} "
              f"objective={_fmt(line.objective)}")
        print(f"  v = {_fmt_vec(line.v)}")
    if degenerate:
        print(f"stopped early: data exhausted after {len(lines)} component(s)")
    if args.output:
        payload = {"lam": lam, "degenerate": degenerate,
                   "components": [_line_dict(line) for line in lines]}
        with open(args.output, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_path(args) -> int:
    data = _load_data(args)
    path_obj = solution_path(data, args.threads)
    for i, seg in enumerate(path_obj.segments, 1):
        hi = "inf" if math.isinf(seg.lambda_hi) else _fmt(seg.lambda_hi)
        print(f"segment {i}: [{_fmt(seg.lambda_lo)}, {hi}) "
              f"preserved={seg.line.preserved} v={_fmt_vec(seg.line.v)} "
              f"z = {_fmt(seg.line.error)} + {_fmt(seg.line.penalty_norm)}"
              f"*lambda")
    bps = path_obj.breakpoints
    print("breakpoints: " + (", ".join(_fmt(b) for b in bps) if bps
                             else "(none)"))
    if args.output:
        write_path(path_obj, args.output)
        if not args.no_plot:
            from .plots import render_path_figure
            fig = _figure_file(args.output)
            render_path_figure(path_obj, fig)
            print(f"wrote {args.output} and {fig}")
        else:
            print(f"wrote {args.output}")
    return EXIT_OK


def _sweep_grid(args, path_obj: SolutionPath) -> list[float]:
    if args.lambdas:
        try:
            grid = sorted(float(tok) for tok in args.lambdas.split(","))
        except ValueError:
            raise _UsageError(f"bad --lambdas list: {args.lambdas!r}") from None
        for lam in grid:
            _check_lam(lam)
        return grid
    # default grid shows the exact piecewise structure: all breakpoints
    # plus interval midpoints, capped with one point past the last change
    bps = path_obj.breakpoints
    grid = {0.0}
    edges = [0.0] + bps
    for a, b in zip(edges, edges[1:]):
        grid.add(b)
        grid.add(0.5 * (a + b))
    grid.add(1.25 * edges[-1] if bps else 1.0)
    return sorted(grid)


def cmd_sweep(args) -> int:
    data = _load_data(args)
    truth = _load_truth(args)
    path_obj = solution_path(data, args.threads)
    rows = []
    for lam in _sweep_grid(args, path_obj):
        line = path_obj.line_at(lam)
        disc = None
        if truth is not None and np.any(line.v != 0.0):
            disc = discordance(truth, line.v)
        rows.append({"lam": lam, "preserved": line.preserved,
                     "error": line.error,
                     "penalty_norm": line.penalty_norm,
                     "objective": line.objective_at(lam),
                     "l0_fraction": l0_fraction(line.v),
                     "discordance": disc})
    if args.output:
        write_sweep(rows, args.output)
        if not args.no_plot:
            from .plots import render_sweep_figure
            fig = _figure_file(args.output)
            render_sweep_figure(rows, fig)
            print(f"wrote {args.output} and {fig}")
        else:
            print(f"wrote {args.output}")
    else:
        print("lam,preserved,error,penalty_norm,objective,l0_fraction,"
              "discordance")
        for row in rows:
            disc = "" if row["discordance"] is None else repr(row["discordance"])
            print(f"{row['lam']!r},{row['preserved']},{row['error']!r},"
                  f"{row['penalty_norm']!r},{row['objective']!r},"
                  f"{row['l0_fraction']!r},{disc}")
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        if args.outliers > 0:
            data, v_true = gen_outlier_data(args.m, args.n, args.outliers,
                                            args.seed)
            params = {"recipe": "outliers", "m": args.m, "n": args.n,
                      "n_outliers": args.outliers, "seed": args.seed}
        else:
            data, v_true = gen_line_data(args.m, args.n, args.seed,
                                         args.noise, args.coef_range)
            params = {"recipe": "line", "m": args.m, "n": args.n,
                      "noise_scale": args.noise,
                      "coef_range": args.coef_range, "seed": args.seed}
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    write_matrix(data, args.output, header=False)
    sidecar = args.output + ".json"
    params["v_true"] = [float(x) for x in v_true]
    with open(sidecar, "w") as fh:
        json.dump(params, fh, indent=2)
        fh.write("\n")
    print(f"wrote {args.output} ({data.n}x{data.m}) and {sidecar}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.grid < 2:
        raise _UsageError("--grid must be at least 2")
    data = _load_data(args)
    path_obj = solution_path(data, args.threads)
    report = sweep_validate(data, path_obj, grid_size=args.grid,
                            threads=args.threads)
    print(f"checked {report.lambdas.size} penalty weights: "
          f"max discrepancy {report.max_rel_discrepancy:.3e}")
    for failure in report.failures:
        print(f"FAIL: {failure}")
    if report.ok:
        print("ok")
        return EXIT_OK
    return EXIT_VERIFY


def cmd_bench(args) -> int:
    if args.m < 2 or args.n < 1 or args.repeat < 1:
        raise _UsageError("bench needs m >= 2, n >= 1, repeat >= 1")
    lam = _check_lam(args.lam)
    threads = resolve_threads(args.threads)
    data, _ = gen_line_data(args.m, args.n, args.seed, noise_scale=1.0)
    best = math.inf
    for _ in range(args.repeat):
        t0 = time.perf_counter()
        line = fit_line(data, lam, threads)
        best = min(best, time.perf_counter() - t0)
    print(f"fit {data.n}x{data.m} lam={_fmt(lam)} threads={threads}: "
          f"best {best:.3f}s of {args.repeat} "
          f"(objective {_fmt(line.objective)})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="l1line",
                     description="l1-norm best-fit lines through the origin "
                                 "with an l1 sparsity penalty")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")

    def common(p, data=True):
        if data:
            p.add_argument("data", help="CSV matrix, rows are observations")
            p.add_argument("--header", action="store_true",
                           help="first CSV row holds column names")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: L1LINE_THREADS or "
                            "all cores)")

    p = sub.add_parser("fit", help="fit a line at one penalty weight")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="penalty weight, nonnegative")
    p.add_argument("--components", type=int, default=1,
                   help="successive components via deflation (default 1)")
    p.add_argument("--output", help="write the fit as JSON")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("path", help="compute the whole regularization path")
    common(p)
    p.add_argument("--output", help="write segments as JSON (plus PNG)")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the figure next to --output")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("sweep",
                       help="tabulate sparsity/accuracy along the path")
    common(p)
    p.add_argument("--lambdas", help="comma-separated weights "
                                     "(default: breakpoints and midpoints)")
    p.add_argument("--truth", help="JSON file with v_true "
                                   "(default: <data>.json if present)")
    p.add_argument("--output", help="write the table as CSV (plus PNG)")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the figure next to --output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="generate synthetic data")
    p.add_argument("--m", type=int, required=True, help="features")
    p.add_argument("--n", type=int, required=True, help="observations")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--outliers", type=int, default=0,
                   help="contaminated rows appended last (default 0)")
    p.add_argument("--noise", type=float, default=0.0,
                   help="Laplace noise scale for the line recipe")
    p.add_argument("--coef-range", type=float, default=100.0,
                   help="projection coefficients drawn from (-r, r)")
    p.add_argument("--output", required=True,
                   help="CSV destination; v_true lands in <output>.json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify",
                       help="check the path against brute force and duals")
    common(p)
    p.add_argument("--grid", type=int, default=200,
                   help="number of weights to test (default 200)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time one fit on generated data")
    common(p, data=False)
    p.add_argument("--m", type=int, default=200)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--repeat", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
