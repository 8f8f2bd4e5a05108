"""Command-line front end.

    fano24 verify --all [--format text|json] [--oracle-grid N]
    fano24 verify --case singular-fiber
    fano24 verify --list-cases
    fano24 lattices

Exit status: 0 on PASS, 1 on any mismatch or failed inequality, 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .azflag import CASES
from .report import build_report
from .surface import PRESETS


def _list_cases() -> str:
    return "\n".join(f"{name}\t{cfg.description}" for name, cfg in CASES.items())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fano24", description=__doc__.splitlines()[0])
    parser.add_argument("--list-cases", action="store_true", help="list the built-in cases and exit")
    sub = parser.add_subparsers(dest="command")

    verify = sub.add_parser("verify", help="recompute the invariants and compare with the printed values")
    which = verify.add_mutually_exclusive_group()
    which.add_argument("--case", action="append", metavar="NAME", help="case to run (repeatable)")
    which.add_argument("--all", action="store_true", help="run every case")
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--oracle-grid", type=int, metavar="N", help="also run the float oracle on an N x N grid")
    verify.add_argument("--list-cases", action="store_true", help="list the built-in cases and exit")

    sub.add_parser("lattices", help="print the exact lattice presets")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.list_cases:
        print(_list_cases())
        return 0
    if args.command == "lattices":
        print("\n\n".join(lat.to_table() for lat in PRESETS.values()))
        return 0
    if args.command != "verify":
        parser.print_usage(sys.stderr)
        return 2
    if args.oracle_grid is not None and args.oracle_grid < 1:
        print("fano24: --oracle-grid must be positive", file=sys.stderr)
        return 2

    if args.all:
        names = list(CASES)
    elif args.case:
        unknown = [n for n in args.case if n not in CASES]
        if unknown:
            print(f"fano24: unknown case {unknown[0]!r}; choose from: {', '.join(CASES)}", file=sys.stderr)
            return 2
        names = args.case
    else:
        print("fano24: verify needs --case NAME or --all", file=sys.stderr)
        return 2

    report = build_report(names, oracle_grid=args.oracle_grid)
    print(report.to_json() if args.format == "json" else report.to_text())
    return 0 if report.passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
