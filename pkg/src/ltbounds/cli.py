"""Command line entry point: ``ltbounds <command> [options]``.

Exit status is 0 when every audit passes, 1 when an audit fails (named on
stderr) and 2 for usage errors or an invalid family file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import DomainError, FamilyValidationError, RangeError
from .report import COMMANDS, Defaults, family_check_report, iter_audits, to_csv, to_json

EXIT_PASS, EXIT_AUDIT, EXIT_USAGE = 0, 1, 2


def _positive(kind):
    def parse(text: str):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a {kind.__name__}: {text!r}")
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=_positive(float), help="absolute tolerance for series tails")
    common.add_argument("--e-max", type=_positive(float), default=5.0)
    common.add_argument("--step", type=_positive(float), default=0.01, help="energy grid step")
    common.add_argument("--nu-max", type=_positive(float), default=20.0)
    common.add_argument("--box", type=_positive(int), default=None, help="torus box size M")
    common.add_argument("--shells", type=_positive(int), default=None, help="sphere shell count M")
    common.add_argument("--quiet", action="store_true", help="no audit summary on stderr")

    parser = argparse.ArgumentParser(prog="ltbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    fam = sub.add_parser("family-check", parents=[common])
    fam.add_argument("--manifold", choices=("sphere", "torus"), default="torus")
    fam.add_argument("--family", type=Path, help="JSON trigonometric family on T^4")
    fam.add_argument("--include-zero-mode", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults = Defaults(e_max=args.e_max, step=args.step, nu_max=args.nu_max, tol=args.tol)
    if args.box is not None:
        defaults.box = args.box
    if args.shells is not None:
        defaults.shells = args.shells
    if defaults.shells < 2:
        parser.error("--shells must be >= 2")
    try:
        if args.command == "family-check":
            report = family_check_report(defaults, manifold=args.manifold, family_path=args.family,
                                         include_zero_mode=args.include_zero_mode,
                                         box=args.box, shells=args.shells)
        else:
            report = COMMANDS[args.command](defaults)
    except (FamilyValidationError, OSError) as exc:
        print(f"ltbounds: invalid family: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, RangeError) as exc:
        print(f"ltbounds: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = to_csv(report, defaults) if args.format == "csv" else to_json(report, defaults)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if not args.quiet:
        for line in iter_audits(report):
            print(line, file=sys.stderr)
    if not report.passed:
        print(f"ltbounds: audit failed: {', '.join(report.failing())}", file=sys.stderr)
        return EXIT_AUDIT
    return EXIT_PASS
