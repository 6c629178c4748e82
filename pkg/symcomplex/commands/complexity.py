"""
complexity: complexity measures of one sequence as a table over n.

    symcomplex complexity --name fibonacci --length 200 --nmax 6 --measures p,pal
    symcomplex complexity --file seq.txt --measures p,pn,window
    symcomplex complexity --word 0110100110010110 --format json
"""
import argparse

from loguru import logger

from symcomplex.commands import name_list
from symcomplex.exceptions import InvalidInputError
from symcomplex.schemas.run import InputSource
from symcomplex.services.complexity import MEASURES, complexity_report
from symcomplex.services.generators import named_sequence, sequence_extender
from symcomplex.services.report_writer import JSON, complexity_csv, render_json, write_output
from symcomplex.services.words import Word, read_sequences


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("complexity", parents=parents, help="Complexity measures of a sequence")
    parser.add_argument("--name", help="Named sequence (needs --length)")
    parser.add_argument("--length", type=int, help="Prefix length of a named sequence")
    parser.add_argument("--block", help="Block of a periodic sequence")
    parser.add_argument("--file", help="Sequence file (first sequence is used)")
    parser.add_argument("--word", help="Inline word")
    parser.add_argument("--measures", default="p,pal", help=f"Comma-separated subset of {','.join(MEASURES)}")
    parser.add_argument("--nmax", type=int, default=10, help="Largest n")
    parser.add_argument("--kmax", type=int, default=3, help="Largest step of arithmetic progressions")
    parser.add_argument("--window", type=int, default=16, help="Window of the maximal-pattern search")
    parser.add_argument("--extend", action="store_true", help="Regenerate named sequences until p(n) is stable")
    parser.set_defaults(handler=cmd_complexity)


def load_word(source: InputSource) -> Word:
    if source.name:
        return named_sequence(source.name, source.length, block=source.block)
    if source.file:
        words = read_sequences(source.file)
        if not words:
            raise InvalidInputError(f"no sequences in {source.file}")
        if len(words) > 1:
            logger.warning(f"{source.file} holds {len(words)} sequences; using the first")
        return words[0]
    return Word.from_text(source.word)


def cmd_complexity(args: argparse.Namespace) -> int:
    source = InputSource(name=args.name, length=args.length, block=args.block, file=args.file, word=args.word)
    measures = name_list(args.measures)
    logger.info(f"Computing {', '.join(measures)} up to n={args.nmax}")
    word = load_word(source)
    extend = sequence_extender(source.name, source.block) if source.name and args.extend else None
    reports = complexity_report(word, measures, args.nmax, extend, k_max=args.kmax, window=args.window)
    if args.format == JSON:
        text = render_json(reports)
    else:
        text = complexity_csv(reports)
    write_output(text, args.out)
    return 0
