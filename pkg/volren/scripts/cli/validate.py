from argparse import ArgumentParser

from argcomplete import FilesCompleter

from volren.scripts.cli.utils import non_negative_int, parse_rgb, positive_int
from volren.utils.help_cli import HELP_BACKGROUND, HELP_MEDIUM, HELP_PROGRESS, HELP_WORKERS


def populate_parser(parser: ArgumentParser):
    parser.add_argument("--medium", required=True, help=HELP_MEDIUM).completer = FilesCompleter(
        allowednames=("csv",)
    )
    parser.add_argument("--samples", type=positive_int, default=100_000, help="Number of simulated rays.")
    parser.add_argument("--seed", type=non_negative_int, default=0, help="Seed of the Philox streams.")
    parser.add_argument(
        "--expect",
        type=parse_rgb,
        default=None,
        help="Compare against this R,G,B color instead of the rendered one (useful to check the check itself).",
    )
    parser.add_argument("--background", type=parse_rgb, default=None, help=HELP_BACKGROUND)
    parser.add_argument("--workers", type=positive_int, default=1, help=HELP_WORKERS)
    parser.add_argument("--progress", action="store_true", help=HELP_PROGRESS)


def get_parser(subparser=None) -> ArgumentParser:
    parser_kwargs = dict(
        name="validate",
        description="check the rendered color of a medium against a Monte Carlo simulation of ray terminations",
        help="Check the rendered color of a medium against a Monte Carlo simulation of ray terminations.",
    )
    parser = (subparser.add_parser if subparser is not None else ArgumentParser)(**parser_kwargs)

    populate_parser(parser)

    return parser


def parse_args():
    return get_parser().parse_args()


def main(args) -> int:
    from volren.scripts.render.validate import validate_main

    report = validate_main(
        args.medium,
        args.samples,
        args.seed,
        expect=args.expect,
        background=args.background,
        workers=args.workers,
        progress=args.progress,
    )
    print(report.to_csv(), end="")
    return 0 if report.passed else 1


if __name__ == "__main__":
    main(parse_args())
