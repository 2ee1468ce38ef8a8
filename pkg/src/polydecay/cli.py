"""Command-line entry point for polydecay.

Each subcommand reads an optional JSON config, runs one verification suite or
experiment, writes CSV/JSON into --out and exits with the documented code:
0 pass, 2 config error, 3 precondition failure, 4 non-convergence, 5 tolerance failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from polydecay import __version__
from polydecay.commands import register_all_commands
from polydecay.config import load_config
from polydecay.errors import PolydecayError

logger = logging.getLogger("polydecay")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run config (defaults are used when omitted)")
    common.add_argument("--out", type=Path, default=Path("polydecay-out"), help="Output directory")
    common.add_argument("--grid-L", dest="grid_L", type=float, help="Override the grid half length L")
    common.add_argument("--grid-N", dest="grid_N", type=int, help="Override the points per axis N")
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log verbosity on stderr",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polydecay",
        description="Fourier multipliers with polyhomogeneous symbols and the decay of their solitary waves",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_all_commands(subparsers, [_common_options()])
    return parser


def _configure_logging(level: str) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(level)
    logger.propagate = False


def main(argv: list[str] | None = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.log_level)
    try:
        config = load_config(args.config_model, args.config, half_length=args.grid_L, points=args.grid_N)
        return args.handler(config, args.out)
    except PolydecayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
