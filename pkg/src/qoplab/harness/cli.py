"""``qoplab <suite> --config PATH [--seed U64] [--out PATH]`` and ``qoplab dump KIND ...``."""
from __future__ import annotations

import argparse
import sys

from ..errors import QoplabError
from . import jsonio
from .config import SUITE_NAMES, ConfigError, load_config
from .dump import DUMP_KINDS, dump_operator
from .suites import run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_CONSTRUCTION = 0, 1, 2, 3


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qoplab", description="Q-operator construction and functional-relation checks.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SUITE_NAMES:
        sp = sub.add_parser(name, help=f"run the {name} suite")
        sp.add_argument("--config", required=True)
        sp.add_argument("--seed", type=_u64)
        sp.add_argument("--out")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte determinism)")
        sp.add_argument("--quiet", action="store_true")
    dp = sub.add_parser("dump", help="write an operator in the sector JSON format")
    dp.add_argument("kind", choices=DUMP_KINDS)
    dp.add_argument("--config", required=True)
    dp.add_argument("--out", required=True)
    dp.add_argument("--seed", type=_u64)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "dump":
            cfg = load_config(args.config, suite="dump", seed=args.seed, out=args.out)
            jsonio.write(args.out, dump_operator(args.kind, cfg))
            return EXIT_PASS
        cfg = load_config(args.config, suite=args.command, seed=args.seed, out=args.out)
        report = run_suite(cfg, timings=args.timings)
    except ConfigError as exc:
        print(f"qoplab: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QoplabError as exc:
        print(f"qoplab: construction failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    if not args.quiet:
        for c in report.checks:
            print(c.line())
        print(f"overall: {'PASS' if report.overall_pass else 'FAIL'}")
    if cfg.out:
        jsonio.write(cfg.out, report)
    return EXIT_PASS if report.overall_pass else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
