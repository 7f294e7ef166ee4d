"""Command-line front end.

Exit codes: 0 success, 1 mathematical failure, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .errors import NordgeomError
from .report import (
    InputError,
    LoadedInput,
    build_report,
    classification,
    load_input,
    load_preset,
    render_classification,
    to_json,
    validate,
)
from .scalars import ScalarError, as_fraction

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _binding(text: str) -> tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected name=rational, got {text!r}")
    try:
        return name.strip(), as_fraction(value.strip())
    except (ValueError, ZeroDivisionError, ScalarError):
        raise argparse.ArgumentTypeError(f"not a rational number: {value!r}") from None


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", nargs="?", help="JSON algebra file")
    p.add_argument("--preset", help="paper-family, paper-frame or paper-frame-abelian")
    p.add_argument("--bind", action="append", type=_binding, default=[], metavar="NAME=VALUE")


def _add_format_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nordgeom", description="Exact curvature invariants of left-invariant Norden structures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check antisymmetry, Jacobi and the Norden conditions")
    _add_input_args(p)
    _add_format_args(p)

    p = sub.add_parser("report", help="compute every invariant")
    _add_input_args(p)
    _add_format_args(p)

    p = sub.add_parser("classify", help="report restricted to the class flags")
    _add_input_args(p)
    _add_format_args(p)

    p = sub.add_parser("verify-paper", help="reproduce the reference tables and theorem checks")
    _add_format_args(p)
    p.add_argument("--golden", metavar="PATH", help="alternative reference-table file")
    return parser


def _load(args) -> LoadedInput:
    if bool(args.file) == bool(args.preset):
        raise UsageError("give exactly one of FILE or --preset")
    bindings = dict(args.bind)
    if args.preset:
        return load_preset(args.preset, bindings)
    return load_input(args.file, bindings)


def _validation_failed(loaded: LoadedInput, fmt: str, out) -> bool:
    verdicts = validate(loaded)
    if all(verdicts.values()):
        return False
    if fmt == "json":
        out.write(to_json({"validation": {k: v.to_dict() for k, v in verdicts.items()}}))
    else:
        for name, v in verdicts.items():
            out.write(f"{name}: {v.describe()}\n")
    return True


def cmd_validate(args, out) -> int:
    loaded = _load(args)
    verdicts = validate(loaded)
    ok = all(verdicts.values())
    if args.format == "json":
        out.write(to_json({"ok": ok, "validation": {k: v.to_dict() for k, v in verdicts.items()}}))
    else:
        for name, v in verdicts.items():
            out.write(f"{name}: {v.describe()}\n")
        out.write("valid\n" if ok else "invalid\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_report(args, out) -> int:
    from .report import render_text

    loaded = _load(args)
    if _validation_failed(loaded, args.format, out):
        return EXIT_FAIL
    report = build_report(loaded)
    out.write(to_json(report) if args.format == "json" else render_text(report))
    return EXIT_OK


def cmd_classify(args, out) -> int:
    from .invariants import compute_invariants

    loaded = _load(args)
    if _validation_failed(loaded, args.format, out):
        return EXIT_FAIL
    cls = classification(compute_invariants(loaded.setup()))
    if args.format == "json":
        out.write(to_json(cls))
    else:
        out.write("\n".join(render_classification(cls)) + "\n")
    return EXIT_OK


def cmd_verify_paper(args, out) -> int:
    from .verification import verify_reference_results

    result = verify_reference_results(args.golden)
    if args.format == "json":
        out.write(to_json(result.to_dict()))
    else:
        out.write(result.render())
    return EXIT_OK if result.ok else EXIT_FAIL


_COMMANDS = {
    "validate": cmd_validate,
    "report": cmd_report,
    "classify": cmd_classify,
    "verify-paper": cmd_verify_paper,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except (UsageError, InputError, ScalarError) as exc:
        print(f"nordgeom: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NordgeomError as exc:
        print(f"nordgeom: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
