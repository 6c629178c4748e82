"""
gen: write a sequence prefix.

    symcomplex gen --name fibonacci --length 13
    symcomplex gen --mechanical --cf 0,2,1,1,1,1,1 --length 10 --lower
    symcomplex gen --characteristic --alpha 0.381966 --length 18
    symcomplex gen --substitution 0=01,1=0 --start 0 --length 13
    symcomplex gen --spec '{"kind": "named", "name": "periodic", "block": "01", "length": 4}'
"""
import argparse

from loguru import logger

from symcomplex.commands import int_list, name_list
from symcomplex.exceptions import InvalidInputError
from symcomplex.schemas.generator import GeneratorSpec
from symcomplex.services.generators import NAMED_SEQUENCES, generate
from symcomplex.services.report_writer import JSON, render_json, write_output
from symcomplex.services.words import format_sequences


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("gen", parents=parents, help="Generate a sequence prefix")
    kind = parser.add_mutually_exclusive_group(required=True)
    kind.add_argument("--name", help=f"Named sequence: {', '.join(NAMED_SEQUENCES)}")
    kind.add_argument("--mechanical", action="store_true", help="Mechanical word (needs --cf or --alpha)")
    kind.add_argument("--characteristic", action="store_true", help="Characteristic word (needs --cf or --alpha)")
    kind.add_argument("--substitution", help="Images like 0=01,1=0")
    kind.add_argument("--spec", help="GeneratorSpec as JSON")
    parser.add_argument("--length", type=int, help="Prefix length")
    parser.add_argument("--block", help="Block of a periodic sequence")
    parser.add_argument("--order", type=int, default=4, help="de Bruijn order")
    parser.add_argument("--cf", help="Continued-fraction terms, e.g. 0,2,1,1,1")
    parser.add_argument("--alpha", type=float, help="Slope in [0, 1]")
    parser.add_argument("--beta", type=float, default=0.0, help="Intercept in [0, 1]")
    parser.add_argument("--start", help="Seed symbol of a substitution fixed point")
    variant = parser.add_mutually_exclusive_group()
    variant.add_argument("--lower", dest="variant", action="store_const", const="lower")
    variant.add_argument("--upper", dest="variant", action="store_const", const="upper")
    parser.add_argument("--header", action="store_true", help="Prefix output with an #alphabet: line")
    parser.set_defaults(handler=cmd_gen, variant="lower")


def build_spec(args: argparse.Namespace) -> GeneratorSpec:
    if args.spec:
        return GeneratorSpec.model_validate_json(args.spec)
    if args.length is None:
        raise InvalidInputError("--length is required")
    if args.substitution:
        images = {}
        for item in name_list(args.substitution):
            letter, sep, image = item.partition("=")
            if not sep:
                raise InvalidInputError(f"substitution image {item!r} must look like 0=01")
            images[letter.strip()] = image.strip()
        return GeneratorSpec(kind="substitution", images=images, seed=args.start, length=args.length)
    if args.mechanical or args.characteristic:
        return GeneratorSpec(
            kind="mechanical" if args.mechanical else "characteristic",
            cf=int_list(args.cf) if args.cf else None,
            alpha=args.alpha,
            beta=args.beta,
            variant=args.variant,
            length=args.length,
        )
    return GeneratorSpec(kind="named", name=args.name, block=args.block, order=args.order, length=args.length)


def cmd_gen(args: argparse.Namespace) -> int:
    spec = build_spec(args)
    logger.info(f"Generating {spec.kind} prefix of length {spec.length}")
    word = generate(spec)
    if args.format == JSON:
        text = render_json({"sequence": str(word), "length": len(word), "alphabet": list(word.alphabet.symbols)})
    else:
        text = format_sequences([word], header=args.header)
    write_output(text, args.out)
    return 0
