"""
intricacy: topological Asc and Int of an SFT.

    symcomplex intricacy --sft golden --mode series
    symcomplex intricacy --sft period2 --mode profile --nmax 12
    symcomplex intricacy --sft figI --mode finite --n 10 --weights neural
"""
import argparse

from loguru import logger

from symcomplex.services.coefficients import CoefficientSystem
from symcomplex.services.intricacy import asc_profile, asc_sft_series, intricacy_finite, subadditivity_defects
from symcomplex.services.report_writer import CSV, models_csv, render_csv, render_json, write_output
from symcomplex.services.subshift import load

SERIES = "series"
PROFILE = "profile"
FINITE = "finite"
SUBADDITIVITY = "subadditivity"


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("intricacy", parents=parents, help="Topological intricacy and Asc")
    parser.add_argument("--sft", required=True, help="Built-in name, JSON file or inline JSON")
    parser.add_argument("--weights", default="uniform", help="uniform, neural or psym:<p>")
    parser.add_argument("--mode", choices=(SERIES, PROFILE, FINITE, SUBADDITIVITY), default=SERIES)
    parser.add_argument("--nmax", type=int, default=12, help="Largest n of a profile (half-range for subadditivity)")
    parser.add_argument("--n", type=int, default=10, help="Horizon for --mode finite")
    parser.set_defaults(handler=cmd_intricacy)


def cmd_intricacy(args: argparse.Namespace) -> int:
    x = load(args.sft)
    cs = CoefficientSystem.parse(args.weights)
    logger.info(f"Intricacy of {x.name or args.sft} ({args.mode}, {cs.label} weights)")
    if args.mode == SERIES:
        result = asc_sft_series(x, cs)
        payload = {
            "sft": x.name,
            "h": result.metadata["h"],
            "asc": result.asc,
            "int": result.int_,
            "method": result.method,
            "weights": result.weights,
            "terms": result.metadata["terms"],
            "tail_bound": result.metadata["tail_bound"],
        }
        text = render_csv([payload]) if args.format == CSV else render_json(payload)
    elif args.mode == PROFILE:
        profile = asc_profile(x, args.nmax, cs)
        if args.format == CSV:
            rows = [
                {"n": r.n, "asc": r.asc, "int": r.int_, "int_identity": r.metadata["int_identity"]}
                for r in profile
            ]
            text = render_csv(rows, comments=[f"sft={x.name}", f"weights={cs.label}"])
        else:
            text = render_json({"sft": x.name, "weights": cs.label, "profile": profile})
    elif args.mode == FINITE:
        result = intricacy_finite(x, args.n, cs)
        text = models_csv([result]) if args.format == CSV else render_json(result)
    else:
        text = render_json(subadditivity_defects(x, args.nmax))
    write_output(text, args.out)
    return 0
