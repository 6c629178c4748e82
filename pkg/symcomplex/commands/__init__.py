"""
CLI subcommands.

Each module exposes ``register(subparsers, parents)``, which adds its parser
and sets ``handler`` to a function ``(args) -> int``.
"""
import argparse
from typing import Dict, List, Optional

from symcomplex.exceptions import InvalidInputError
from symcomplex.services.report_writer import FORMATS


def common_parser() -> argparse.ArgumentParser:
    """Flags every subcommand accepts."""
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("output and runtime")
    group.add_argument("--out", help="Write output to this file instead of stdout")
    group.add_argument("--format", choices=FORMATS, help="Output format (default depends on the command)")
    group.add_argument("--threads", type=int, help="Worker threads (default from SYMC_THREADS)")
    group.add_argument("--seed", type=int, help="Seed for optimizer start jitter (default from SYMC_SEED)")
    group.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR (default from LOG_LEVEL)")
    return parser


def int_list(text: str) -> List[int]:
    """Parse "0,2,5" into [0, 2, 5]."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidInputError(f"expected comma-separated integers, got {text!r}")


def name_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def parameter_map(items: Optional[List[str]]) -> Dict[str, float]:
    """
    Parse ``p00=0.618`` style assignments (repeatable or comma-separated).

    Keys are upper-cased on their leading letter, so p00 and P00 are the same.
    """
    params: Dict[str, float] = {}
    for item in items or []:
        for part in name_list(item):
            key, sep, value = part.partition("=")
            if not sep:
                raise InvalidInputError(f"parameter {part!r} must look like P00=0.5")
            key = key.strip()
            key = key[:1].upper() + key[1:]
            try:
                params[key] = float(value)
            except ValueError:
                raise InvalidInputError(f"parameter {key} has non-numeric value {value!r}")
    return params
