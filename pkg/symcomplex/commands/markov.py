"""
markov: Markov measures on SFTs.

    symcomplex markov eval --sft golden --order 1 --params p00=0.618
    symcomplex markov eval --sft golden --order 2 --params P000=0.483,P100=0.569 --brute 12
    symcomplex markov optimize --sft full2 --order 1 --target int --grid 0.02
    symcomplex markov table --which golden2
"""
import argparse
from typing import Any, Dict, List

from loguru import logger

from symcomplex.commands import parameter_map
from symcomplex.config import settings
from symcomplex.exceptions import InvalidInputError
from symcomplex.services import markov
from symcomplex.services.coefficients import CoefficientSystem
from symcomplex.services.optimizer import TARGETS, family, optimize
from symcomplex.services.report_writer import CSV, models_csv, render_csv, render_json, write_output
from symcomplex.services.subshift import load, named

TABLES = {
    "golden1": ("golden", 1, markov.GOLDEN_1STEP_TABLE),
    "golden2": ("golden", 2, markov.GOLDEN_2STEP_TABLE),
    "full2": ("full2", 1, markov.FULL2_1STEP_TABLE),
}


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("markov", help="Markov measures: evaluate, optimize, tables")
    actions = parser.add_subparsers(dest="action", required=True)

    evaluate = actions.add_parser("eval", parents=parents, help="Entropy, Asc and Int of one measure")
    evaluate.add_argument("--sft", required=True)
    evaluate.add_argument("--order", type=int, default=1)
    evaluate.add_argument("--params", action="append", help="Transition probabilities, e.g. p00=0.618")
    evaluate.add_argument("--brute", type=int, help="Also compute finite-n Asc and Int at this n")
    evaluate.add_argument("--weights", default="uniform", help="Weights for --brute: uniform, neural, psym:<p>")
    evaluate.set_defaults(handler=cmd_markov_eval)

    opt = actions.add_parser("optimize", parents=parents, help="Local maxima over a Markov family")
    opt.add_argument("--sft", required=True)
    opt.add_argument("--order", type=int, default=1)
    opt.add_argument("--target", choices=tuple(TARGETS), required=True)
    opt.add_argument("--grid", type=float, help="Grid spacing (default from SYMC_OPTIMIZER_GRID)")
    opt.add_argument("--budget", type=int, help="Maximum grid probes")
    opt.add_argument("--jitter", type=float, default=0.0, help="Start-simplex perturbation")
    opt.set_defaults(handler=cmd_markov_optimize)

    table = actions.add_parser("table", parents=parents, help="Recompute a reference table")
    table.add_argument("--which", choices=tuple(TABLES), required=True)
    table.set_defaults(handler=cmd_markov_table)


def cmd_markov_eval(args: argparse.Namespace) -> int:
    x = load(args.sft)
    params = parameter_map(args.params)
    logger.info(f"Evaluating {args.order}-step measure on {x.name or args.sft} with {params}")
    m = markov.build_rstep(x, args.order, params)
    evaluation = markov.evaluate(m)
    if args.brute:
        cs = CoefficientSystem.parse(args.weights)
        evaluation.metadata.update(
            brute_n=args.brute,
            brute_weights=cs.label,
            brute_asc=markov.brute_asc_mu(m, args.brute, cs),
            brute_int=markov.brute_int_mu(m, args.brute, cs),
        )
    text = models_csv([evaluation]) if args.format == CSV else render_json(evaluation)
    write_output(text, args.out)
    return 0


def cmd_markov_optimize(args: argparse.Namespace) -> int:
    fam = family(args.sft, args.order)
    logger.info(f"Optimizing {args.target} over {fam.name} ({', '.join(fam.parameters)})")
    report = optimize(
        fam,
        args.target,
        budget=args.budget,
        grid=args.grid,
        threads=args.threads,
        seed=args.seed,
        jitter=args.jitter,
    )
    if args.format == CSV:
        rows = [{**m.parameters, "value": m.value} for m in report.maxima]
        text = render_csv(rows, list(fam.parameters) + ["value"], comments=[f"target={args.target}", f"family={fam.name}"])
    else:
        text = render_json(report)
    write_output(text, args.out)
    return 0


def table_rows(which: str) -> List[Dict[str, Any]]:
    """Computed values next to the reference values of a table."""
    if which not in TABLES:
        raise InvalidInputError(f"unknown table {which!r}; expected one of {', '.join(TABLES)}")
    sft_name, order, rows = TABLES[which]
    x = named(sft_name)
    result = []
    for params, h, asc, int_ in rows:
        evaluation = markov.evaluate(markov.build_rstep(x, order, params))
        result.append({
            **params,
            "h": evaluation.h,
            "asc": evaluation.asc,
            "int": evaluation.int_,
            "h_reference": h,
            "asc_reference": asc,
            "int_reference": int_,
        })
    return result


def cmd_markov_table(args: argparse.Namespace) -> int:
    rows = table_rows(args.which)
    if args.format == CSV:
        text = render_csv(rows, digits=min(settings.csv_significant_digits, 4))
    else:
        text = render_json({"table": args.which, "rows": rows})
    write_output(text, args.out)
    return 0
