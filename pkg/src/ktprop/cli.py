"""Command line front end: ``ktprop run`` and ``ktprop selftest``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import KTError
from .problem import ProblemError, load_problem
from .report import TaskError, render_text, run_problem
from .selftest import selftest

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VIOLATION = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ktprop",
        description="Khovanskii-Teissier inequalities and their equality cases on exact models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the tasks of a problem file")
    run.add_argument("problem", type=Path)
    run.add_argument("--format", choices=("text", "structured"), default="text")
    run.add_argument("--output", type=Path, default=None, help="write the report here instead of stdout")
    run.add_argument("--seed", type=int, default=0, help="default seed for scan tasks")
    run.add_argument("--tolerance", type=float, default=None, help="relative tolerance (approximate mode only)")

    st = sub.add_parser("selftest", help="run the built-in property suites")
    st.add_argument("--seed", type=int, default=42)
    return parser


def _run(args) -> int:
    tolerance = 1e-9 if args.tolerance is None else args.tolerance
    try:
        problem = load_problem(args.problem, tolerance)
    except OSError as exc:
        print(f"error: cannot read {args.problem}: {exc.strerror}", file=sys.stderr)
        return EXIT_VALIDATION
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.tolerance is not None and not problem.approximate:
        print("warning: --tolerance ignored, the problem is exact", file=sys.stderr)
    try:
        report = run_problem(problem, seed=args.seed, tolerance=tolerance)
    except (TaskError, KTError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    text = report.to_json() if args.format == "structured" else render_text(report)
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text, encoding="utf-8")

    bad = report.inconsistent_tasks
    if bad:
        print(f"error: property violation in task(s) {', '.join(map(str, bad))}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _run(args)
    return selftest(args.seed)


if __name__ == "__main__":
    sys.exit(main())
