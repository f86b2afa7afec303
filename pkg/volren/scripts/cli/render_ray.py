from argparse import ArgumentParser

from argcomplete import FilesCompleter

from volren.scripts.cli.utils import parse_rgb
from volren.utils.help_cli import HELP_BACKGROUND, HELP_MEDIUM


def populate_parser(parser: ArgumentParser):
    parser.add_argument("--medium", required=True, help=HELP_MEDIUM).completer = FilesCompleter(
        allowednames=("csv",)
    )
    parser.add_argument("--background", type=parse_rgb, default=None, help=HELP_BACKGROUND)
    parser.add_argument(
        "--form",
        choices=["density", "alpha"],
        default="density",
        help="Compute the color from densities and segment lengths, or from the alpha-compositing weights.",
    )


def get_parser(subparser=None) -> ArgumentParser:
    parser_kwargs = dict(
        name="render-ray",
        description="render the expected color of a ray through a piecewise-constant medium",
        help="Render the expected color of a ray through a piecewise-constant medium.",
    )
    parser = (subparser.add_parser if subparser is not None else ArgumentParser)(**parser_kwargs)

    populate_parser(parser)

    return parser


def parse_args():
    return get_parser().parse_args()


def main(args) -> int:
    from volren.scripts.render.ray import render_ray_main

    print(render_ray_main(args.medium, args.background, args.form), end="")
    return 0


if __name__ == "__main__":
    main(parse_args())
