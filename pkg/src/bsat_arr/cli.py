"""Command-line front end: `bsat-arr`.

Thin client over the shared run handlers.  Prints one run report per
invocation (canonical JSON by default, a human table with --format table)
on stdout and diagnostics on stderr.

Exit codes: 0 when every proved-statement check passes (or the run is
report-only), 1 when a proved-statement check fails, 2 on usage errors,
3 on precondition violations.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, runops
from .errors import PreconditionError, UsageError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise UsageError(f"{path} must contain a JSON object")
    return obj


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bsat-arr",
        description=(
            "Exact Bernstein-Sato, Milnor-fiber cohomology, rewriting, and "
            "holonomic-length computations for central hyperplane arrangements."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("json", "table"),
        default="json",
        help="output rendering (default: json)",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_bf = sub.add_parser(
        "bfunction",
        parents=[common],
        help="b-function: generic closed form or isolated-singularity computation",
    )
    mode = p_bf.add_mutually_exclusive_group(required=True)
    mode.add_argument(
        "--generic",
        action="store_true",
        help="closed form for a generic arrangement (needs --n and --k)",
    )
    mode.add_argument(
        "--isolated",
        action="store_true",
        help="Jacobian-ideal computation from an arrangement file (needs --input)",
    )
    p_bf.add_argument("--n", type=int, help="ambient dimension (generic mode)")
    p_bf.add_argument("--k", type=int, help="number of hyperplanes (generic mode)")
    p_bf.add_argument("--input", help="arrangement JSON file (isolated mode)")

    p_mil = sub.add_parser(
        "milnor",
        parents=[common],
        help="top local cohomology dimensions by degree",
    )
    p_mil.add_argument("--input", required=True, help="arrangement JSON file")
    p_mil.add_argument(
        "--max-degree",
        type=int,
        help="scan degrees 0..D (default: two past the nonvanishing window)",
    )

    p_ver = sub.add_parser(
        "verify",
        parents=[common],
        help="run the theorem-check suite over a grid or one arrangement",
    )
    p_ver.add_argument(
        "--grid",
        help=f'parameter grid, e.g. "{runops.DEFAULT_GRID}" (the default)',
    )
    p_ver.add_argument("--input", help="arrangement JSON file (instead of a grid)")

    p_len = sub.add_parser(
        "length",
        parents=[common],
        help="holonomic length of the full localization",
    )
    p_len.add_argument("--input", required=True, help="arrangement JSON file")

    p_rw = sub.add_parser(
        "rewrite",
        parents=[common],
        help="rewrite a standard product onto the distinguished basis",
    )
    p_rw.add_argument("--input", required=True, help="arrangement JSON file")
    p_rw.add_argument(
        "--product",
        required=True,
        help='comma list of 1-based hyperplane indices, repeats allowed, e.g. "1,2,2"',
    )
    p_rw.add_argument(
        "--degree",
        type=int,
        help="expected total degree of the product (cross-check)",
    )
    return parser


def _dispatch(args: argparse.Namespace) -> dict:
    if args.subcommand == "bfunction":
        if args.generic:
            if args.n is None or args.k is None:
                raise UsageError("--generic needs both --n and --k")
            return runops.run_bfunction_generic(args.n, args.k)
        if args.input is None:
            raise UsageError("--isolated needs --input FILE")
        return runops.run_bfunction_isolated(_load_json(args.input))
    if args.subcommand == "milnor":
        return runops.run_milnor(_load_json(args.input), max_degree=args.max_degree)
    if args.subcommand == "verify":
        if args.grid is not None and args.input is not None:
            raise UsageError("pass either --grid or --input, not both")
        arrangement = _load_json(args.input) if args.input is not None else None
        return runops.run_verify(grid=args.grid, arrangement=arrangement)
    if args.subcommand == "length":
        return runops.run_length(_load_json(args.input))
    if args.subcommand == "rewrite":
        return runops.run_rewrite(
            _load_json(args.input), args.product, degree=args.degree
        )
    raise UsageError(f"unknown subcommand {args.subcommand!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _dispatch(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.format == "table":
        print(runops.report_to_table(report))
    else:
        print(runops.canonical_json(report))
    return EXIT_CHECK_FAILED if runops.report_exit_code(report) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
