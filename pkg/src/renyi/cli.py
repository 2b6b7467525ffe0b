"""Command line entry point.

Exit statuses: 0 success, 2 usage error, 3 model parse error,
4 precondition failure, 5 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import inference
from .errors import EXIT_PARSE, ModelParseError, RenyiError
from .model import parse_model
from .report import render


def _windows(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out or any(n < 0 for n in out):
        raise argparse.ArgumentTypeError(f"bad window list {text!r}")
    return out


def _nu(text: str) -> str:
    if text in ("counting", "pushforward") or (text.startswith("file:") and len(text) > 5):
        return text
    raise argparse.ArgumentTypeError("expected counting, pushforward or file:<path>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyi",
        description="Exact conditional probability with Rényi states on finite carriers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--model", required=True, type=Path, help="model file")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("condition", help="P(event | given)")
    common(p)
    p.add_argument("--event", required=True)
    p.add_argument("--given", default=None, help="conditioning event (default: whole carrier)")

    p = sub.add_parser("disintegrate", help="conditional states given the model's statistic")
    common(p)
    p.add_argument("--nu", type=_nu, default="counting")
    p.add_argument("--event", action="append", default=[],
                   help="event or function to check factorization for (repeatable)")
    p.add_argument("--given", action="append", default=[],
                   help="conditioning event paired with each --event (default: whole carrier)")

    p = sub.add_parser("check", help="consistency and reconstruction of a conditional family")
    common(p)

    p = sub.add_parser("posterior", help="posterior across truncation windows of an improper prior")
    common(p)
    p.add_argument("--windows", type=_windows, required=True, help="e.g. 1,2,3 or 1..5")

    p = sub.add_parser("validate", help="parse a model and check its bunch axioms")
    common(p)
    return parser


def run(args) -> tuple[dict, int]:
    text = args.model.read_text(encoding="utf-8")
    if args.command == "posterior":
        return inference.run_posterior(inference.parse_family(text), args.windows)
    model = parse_model(text)
    if args.command == "condition":
        return inference.run_condition(model, args.event, args.given)
    if args.command == "disintegrate":
        if len(args.given) > len(args.event):
            raise ModelParseError("more --given than --event flags")
        givens = args.given + [None] * (len(args.event) - len(args.given))
        pairs = list(zip(args.event, givens))
        if args.nu.startswith("file:"):
            nu_text = Path(args.nu[5:]).read_text(encoding="utf-8")
            return inference.run_disintegrate(model, "supplied", nu_text, pairs)
        return inference.run_disintegrate(model, args.nu, None, pairs)
    if args.command == "check":
        return inference.run_check(model)
    if args.command == "validate":
        return inference.run_validate(model)
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, status = run(args)
    except ModelParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RenyiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    sys.stdout.write(render(report, args.format))
    return status


if __name__ == "__main__":
    sys.exit(main())
