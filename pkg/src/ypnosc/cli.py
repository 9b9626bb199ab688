"""Command line front end: ``check``, ``run``, and ``bench``.

Exit codes: 0 success, 1 safety violation, 2 file or parse errors.
Reports go to stdout; timings go to stderr so piped output stays clean.
"""

from __future__ import annotations

import argparse
import sys
import time

from .bench import bench_kernel, format_report, index_strategy_bench, report_csv
from .errors import ParseError, SafetyViolationError, YpnoscError
from .gridio import GridData, load_grid_file, save_grid_file
from .runtime import list_grid, run_a
from .safety import check_application
from .syntax import parse_program


def _fmt_index(idx) -> str:
    return "(" + ",".join(str(c) for c in idx) + ")"


def _load_program_parts(args):
    with open(args.program, "r", encoding="utf-8") as fh:
        prog = parse_program(fh.read())
    stencil = prog.stencils.get(args.stencil)
    if stencil is None:
        raise YpnoscError(f"no stencil named {args.stencil!r} in {args.program}")
    boundary = prog.boundaries.get(args.boundary)
    if boundary is None:
        raise YpnoscError(f"no boundary named {args.boundary!r} in {args.program}")
    return stencil, boundary


def cmd_check(args) -> int:
    stencil, boundary = _load_program_parts(args)
    report = check_application(stencil, boundary)
    if report.ok:
        print("OK")
        return 0
    for offset, missing in report.violations:
        print(f"unsafe offset {_fmt_index(offset)}: missing boundary region {_fmt_index(missing)}")
    return 1


def cmd_run(args) -> int:
    stencil, boundary = _load_program_parts(args)
    gd = load_grid_file(args.input, args.format)
    if gd.rank != stencil.dims.rank:
        raise YpnoscError(
            f"grid rank {gd.rank} does not match stencil rank {stencil.dims.rank}"
        )
    start = time.perf_counter()
    g = list_grid(stencil.dims, gd.lower, gd.upper, gd.values, boundary)
    for _ in range(args.iterations):
        g = run_a(stencil, g)
    elapsed = time.perf_counter() - start
    out = GridData(
        lower=gd.lower,
        upper=gd.upper,
        values=g.interior_values(),
        elem_type=boundary.elem_type,
        pgm_maxval=gd.pgm_maxval,
        pgm_magic=gd.pgm_magic,
    )
    save_grid_file(args.output, out, args.format)
    per_iter = elapsed / args.iterations if args.iterations else 0.0
    print(
        f"total {elapsed:.4g} s, {args.iterations} iterations, mean/iter {per_iter:.4g} s",
        file=sys.stderr,
    )
    return 0


def cmd_bench(args) -> int:
    if args.index_strategies:
        report = index_strategy_bench(args.size, args.iterations, runs=args.runs)
    else:
        report = bench_kernel(args.kernel, args.size, args.iterations, runs=args.runs)
    print(format_report(report))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(report_csv(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ypnosc", description="stencil DSL checker, runner, and benchmarks"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="verify a stencil against a boundary")
    p_check.add_argument("program")
    p_check.add_argument("stencil")
    p_check.add_argument("boundary")
    p_check.set_defaults(fn=cmd_check)

    p_run = sub.add_parser("run", help="apply a stencil to a grid file")
    p_run.add_argument("program")
    p_run.add_argument("stencil")
    p_run.add_argument("boundary")
    p_run.add_argument("input")
    p_run.add_argument("-n", "--iterations", type=int, default=1)
    p_run.add_argument("-o", "--output", required=True)
    p_run.add_argument("--format", choices=("text", "pgm"), default=None)
    p_run.set_defaults(fn=cmd_run)

    p_bench = sub.add_parser("bench", help="time the DSL against reference loops")
    p_bench.add_argument("kernel", choices=("laplace", "log"))
    p_bench.add_argument("size", type=int)
    p_bench.add_argument("iterations", type=int)
    p_bench.add_argument("--runs", type=int, default=10)
    p_bench.add_argument("--csv", default=None, help="also write a CSV report")
    p_bench.add_argument(
        "--index-strategies",
        action="store_true",
        help="compare indexing strategies instead of the kernel variants",
    )
    p_bench.set_defaults(fn=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SafetyViolationError as exc:
        for offset, missing in exc.report.violations:
            print(
                f"unsafe offset {_fmt_index(offset)}: "
                f"missing boundary region {_fmt_index(missing)}"
            )
        return 1
    except (ParseError, OSError, YpnoscError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
