from argparse import ArgumentParser

from argcomplete import FilesCompleter

from volren.scripts.cli.utils import (
    autocomplete_scene,
    non_negative_int,
    parse_int_list,
    parse_params,
    parse_rgb,
    positive_int,
)
from volren.utils.help_cli import HELP_BACKGROUND, HELP_PARAMS, HELP_PROGRESS, HELP_RAY, HELP_SCENE


def populate_parser(parser: ArgumentParser):
    parser.add_argument("--scene", required=True, help=HELP_SCENE).completer = autocomplete_scene
    parser.add_argument("--params", type=parse_params, default=[], help=HELP_PARAMS)
    parser.add_argument("--ray", type=parse_params, default=[], help=HELP_RAY)
    parser.add_argument(
        "--ns",
        type=parse_int_list,
        default=[8, 16, 32, 64, 128, 256, 512, 1024],
        help="Sorted, comma-separated segment counts to sweep, e.g. 8,16,32.",
    )
    parser.add_argument(
        "--reference-steps",
        type=positive_int,
        default=10**6,
        help="Riemann steps of the reference, used when the scene has no closed form.",
    )
    parser.add_argument(
        "--stratified",
        action="store_true",
        help="Sample each segment at a seeded random position instead of its midpoint.",
    )
    parser.add_argument("--seed", type=non_negative_int, default=0, help="Seed used with --stratified.")
    parser.add_argument("--background", type=parse_rgb, default=None, help=HELP_BACKGROUND)
    parser.add_argument(
        "--no-timing",
        action="store_true",
        help="Write 0.0 in the seconds column so that the output file is byte-stable.",
    )
    parser.add_argument("--progress", action="store_true", help=HELP_PROGRESS)
    parser.add_argument("--out", default=None, help="Where the convergence CSV is written.").completer = (
        FilesCompleter(allowednames=("csv",))
    )
    parser.add_argument(
        "--plot", default=None, help="Optional html file for a log-log chart of the errors (requires volren[plot])."
    )
    parser.add_argument(
        "--print",
        action="store_true",
        help="Print the resolved scene configuration following a tree structure and exit.",
    )


def get_parser(subparser=None) -> ArgumentParser:
    parser_kwargs = dict(
        name="convergence",
        description="measure how the piecewise-constant estimator converges as the number of segments grows",
        help="Measure how the piecewise-constant estimator converges as the number of segments grows.",
    )
    parser = (subparser.add_parser if subparser is not None else ArgumentParser)(**parser_kwargs)

    populate_parser(parser)

    return parser


def parse_args():
    return get_parser().parse_args()


def main(args) -> int:
    import sys

    from volren.medium.piecewise import Placement
    from volren.quadrature import empirical_order
    from volren.scripts.render.convergence import convergence_main
    from volren.scripts.render.scene import build_field, build_ray, load_scene_config

    scene_cfg, sources = load_scene_config(args.scene, args.params, args.ray)

    if args.print:
        from volren.utils.rich_config import print_config

        print_config(scene_cfg, sources, tree_label=f"<scene {args.scene}>")
        return 0

    if args.out is None:
        raise ValueError("--out is required unless --print is given")

    rows = convergence_main(
        build_field(scene_cfg),
        build_ray(scene_cfg),
        args.ns,
        args.out,
        args.reference_steps,
        placement=Placement.stratified(args.seed) if args.stratified else Placement.uniform(),
        background=args.background,
        timing=not args.no_timing,
        plot_path=args.plot,
        progress=args.progress,
    )
    order = empirical_order(rows)
    print(
        f"empirical order: {'n/a' if order is None else format(order, '.3f')}",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    main(parse_args())
