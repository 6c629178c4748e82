"""
symcomplex command-line entry point.

Usage:
    symcomplex gen --name fibonacci --length 13
    symcomplex complexity --name morse --length 512 --nmax 4 --measures p
    symcomplex sft info --sft golden --nmax 10
    symcomplex intricacy --sft golden --mode series
    symcomplex markov optimize --sft golden --order 1 --target int
"""
import argparse
import sys
from typing import List, Optional

from loguru import logger

from symcomplex import __version__
from symcomplex.commands import common_parser
from symcomplex.commands import complexity, gen, intricacy, markov, sft
from symcomplex.config.logging_config import setup_logging
from symcomplex.middleware.error_handler import handle_exception

COMMANDS = (gen, complexity, sft, intricacy, markov)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symcomplex",
        description="Complexity of sequences and subshifts: factor, palindrome and pattern "
        "complexity, entropy, intricacy and Markov-measure maximizers",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, help="Command to execute")
    parents = [common_parser()]
    for command in COMMANDS:
        command.register(subparsers, parents)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level)
    logger.info(f"symcomplex {args.command} started")
    try:
        code = args.handler(args)
    except Exception as exc:
        return handle_exception(exc)
    logger.info(f"symcomplex {args.command} finished")
    return code


if __name__ == "__main__":
    sys.exit(main())
