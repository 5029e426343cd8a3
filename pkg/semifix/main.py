#!/usr/bin/env python3
"""
Command-line entry point for semifix

Subcommands:
- classify: report the involutive quiver, factor types and predicted dimensions
- verify:   check a numberfield setup against the matrix oracle
- table:    print the loop-case table with witness setups
- selftest: verify the built-in setups
- history:  show or clear the recorded verification runs
"""

import argparse
import logging
import sys
from typing import List, Optional

from semifix import __version__
from semifix.api.commands import (
    EXIT_ERROR,
    JSON,
    TEXT,
    cmd_classify,
    cmd_history,
    cmd_selftest,
    cmd_table,
    cmd_verify,
)
from semifix.errors import ConfigError
from semifix.storage.config import load_runtime_settings

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(verbose: bool = False) -> None:
    """
    Log to <home>/semifix.log and stderr.

    The level is SEMIFIX_LOG_LEVEL (default INFO); verbose forces DEBUG.
    """
    settings = load_runtime_settings()
    log_file = settings.home / "semifix.log"
    log_file.parent.mkdir(parents=True, exist_ok=True)

    level = logging.DEBUG if verbose else getattr(logging, settings.log_level, logging.INFO)
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler(),
        ],
        force=True,
    )


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


class CliParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with EXIT_ERROR"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _add_format_flags(parser: argparse.ArgumentParser, default: str) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--json", dest="fmt", action="store_const", const=JSON, help="machine-readable output")
    group.add_argument("--text", dest="fmt", action="store_const", const=TEXT, help="plain-text output")
    parser.set_defaults(fmt=default)


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="semifix",
        description="Fixed points and eigenspaces of semilinear automorphisms of classical groups",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    classify = sub.add_parser("classify", help="classify a setup")
    classify.add_argument("config", help="config file (JSON) or the name of a saved setup")
    classify.add_argument("-o", "--output", help="write the report here instead of stdout")
    classify.add_argument("--save", metavar="NAME", help="store the validated setup under NAME")
    _add_format_flags(classify, JSON)

    verify = sub.add_parser("verify", help="verify a numberfield setup with the matrix oracle")
    verify.add_argument("config", help="config file (JSON) or the name of a saved setup")
    verify.add_argument("--trials", type=_positive_int, help="number of random realizations (default: config)")
    verify.add_argument("--seed", type=int, help="seed of the first trial (default: config)")
    verify.add_argument("--exact", action="store_true", help="exact rational elimination")
    verify.add_argument("-o", "--output", help="write the report here instead of stdout")
    verify.add_argument("--save", metavar="NAME", help="store the validated setup under NAME")
    _add_format_flags(verify, JSON)

    table = sub.add_parser("table", help="loop-case table with witnesses")
    table.add_argument("--bounds", help="witness search bounds NMAX:MNMAX")
    table.add_argument("-o", "--output", help="write the table here instead of stdout")
    _add_format_flags(table, TEXT)

    selftest = sub.add_parser("selftest", help="verify the built-in setups")
    selftest.add_argument("--trials", type=_positive_int, default=2, help="realizations per setup")

    history = sub.add_parser("history", help="recorded verification runs")
    history.add_argument("--last", type=_positive_int, default=10, help="number of runs to show")
    history.add_argument("--failed", action="store_true", help="only runs with a failed check")
    history.add_argument("--clear", action="store_true", help="drop the recorded runs")
    _add_format_flags(history, TEXT)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help and --version exit 0; usage errors exit EXIT_ERROR
        return e.code if isinstance(e.code, int) else EXIT_ERROR

    try:
        configure_logging(args.verbose)
    except ConfigError as e:
        print(f"semifix: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR

    logger.debug(f"semifix {__version__}: {args.command}")
    if args.command == "classify":
        return cmd_classify(args.config, output=args.output, fmt=args.fmt, save=args.save)
    if args.command == "verify":
        return cmd_verify(args.config, trials=args.trials, seed=args.seed, exact=args.exact,
                          output=args.output, fmt=args.fmt, save=args.save)
    if args.command == "table":
        return cmd_table(bounds=args.bounds, fmt=args.fmt, output=args.output)
    if args.command == "history":
        return cmd_history(last=args.last, failed=args.failed, clear=args.clear, fmt=args.fmt)
    return cmd_selftest(trials=args.trials)


if __name__ == "__main__":
    sys.exit(main())
