"""
sft: facts about a shift of finite type.

    symcomplex sft info --sft golden --nmax 10
    symcomplex sft pattern --sft golden --set 0,2
    symcomplex sft parry --sft figI
"""
import argparse
from typing import Any, Dict

from loguru import logger

from symcomplex.commands import int_list
from symcomplex.services import markov
from symcomplex.services.report_writer import CSV, models_csv, render_csv, render_json, write_output
from symcomplex.services.subshift import (
    AUTO,
    AUTOMATON,
    ENUMERATE,
    FAST,
    Sft,
    count_blocks,
    de_bruijn_irreducibility_profile,
    entropy,
    is_power_positive,
    load,
    pattern_count,
    primitive_exponent,
)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("sft", help="Shift-of-finite-type facts")
    actions = parser.add_subparsers(dest="action", required=True)

    info = actions.add_parser("info", parents=parents, help="Matrix, entropy, block counts, mixing")
    info.add_argument("--sft", required=True, help="Built-in name, JSON file or inline JSON")
    info.add_argument("--nmax", type=int, default=10, help="Largest block length")
    info.set_defaults(handler=cmd_sft_info)

    pattern = actions.add_parser("pattern", parents=parents, help="Pattern count N(S)")
    pattern.add_argument("--sft", required=True)
    pattern.add_argument("--set", required=True, help="Coordinates, e.g. 0,2,5")
    pattern.add_argument("--method", choices=(AUTO, FAST, ENUMERATE, AUTOMATON), default=AUTO)
    pattern.set_defaults(handler=cmd_sft_pattern)

    parry = actions.add_parser("parry", parents=parents, help="Measure of maximal entropy")
    parry.add_argument("--sft", required=True)
    parry.set_defaults(handler=cmd_sft_parry)


def sft_info(x: Sft, n_max: int) -> Dict[str, Any]:
    exponent = primitive_exponent(x)
    return {
        "name": x.name,
        "alphabet": list(x.symbols.symbols),
        "states": list(x.states.symbols),
        "matrix": [list(row) for row in x.adjacency],
        "entropy": entropy(x),
        "block_counts": [count_blocks(x, n) for n in range(1, n_max + 1)],
        "primitive_exponent": exponent,
        "power_positive": is_power_positive(x, 2),
        "de_bruijn_irreducible": {
            str(n): ok for n, ok in de_bruijn_irreducibility_profile(x, range(2, min(n_max, 8) + 1)).items()
        },
    }


def cmd_sft_info(args: argparse.Namespace) -> int:
    x = load(args.sft)
    logger.info(f"SFT info for {x.name or args.sft}")
    info = sft_info(x, args.nmax)
    if args.format == CSV:
        rows = [{"n": n, "block_count": c} for n, c in enumerate(info["block_counts"], start=1)]
        text = render_csv(rows, comments=[f"entropy={info['entropy']:.6g}", f"primitive_exponent={info['primitive_exponent']}"])
    else:
        text = render_json(info)
    write_output(text, args.out)
    return 0


def cmd_sft_pattern(args: argparse.Namespace) -> int:
    x = load(args.sft)
    members = int_list(args.set)
    count = pattern_count(x, members, method=args.method)
    write_output(render_json({"sft": x.name, "set": sorted(set(members)), "count": count, "method": args.method}), args.out)
    return 0


def cmd_sft_parry(args: argparse.Namespace) -> int:
    x = load(args.sft)
    evaluation = markov.evaluate(markov.parry(x))
    evaluation.metadata["entropy_top"] = entropy(x)
    text = models_csv([evaluation]) if args.format == CSV else render_json(evaluation)
    write_output(text, args.out)
    return 0
