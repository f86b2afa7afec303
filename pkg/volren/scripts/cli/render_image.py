from argparse import ArgumentParser

from argcomplete import FilesCompleter

from volren.scripts.cli.utils import (
    autocomplete_scene,
    non_negative_int,
    parse_params,
    parse_resolution,
    parse_rgb,
    positive_int,
)
from volren.utils.help_cli import (
    HELP_BACKGROUND,
    HELP_CAMERA,
    HELP_PARAMS,
    HELP_PROGRESS,
    HELP_SCENE,
    HELP_WORKERS,
)


def populate_parser(parser: ArgumentParser):
    parser.add_argument("--scene", required=True, help=HELP_SCENE).completer = autocomplete_scene
    parser.add_argument("--params", type=parse_params, default=[], help=HELP_PARAMS)
    parser.add_argument("--camera", type=parse_params, default=[], help=HELP_CAMERA)
    parser.add_argument("--res", type=parse_resolution, default=(64, 64), help="Image resolution as WIDTHxHEIGHT.")
    parser.add_argument(
        "--samples", type=positive_int, default=64, help="Number of piecewise-constant segments per pixel ray."
    )
    parser.add_argument(
        "--stratified",
        action="store_true",
        help="Sample each segment at a seeded random position instead of its midpoint.",
    )
    parser.add_argument("--seed", type=non_negative_int, default=0, help="Seed used with --stratified.")
    parser.add_argument("--background", type=parse_rgb, default=None, help=HELP_BACKGROUND)
    parser.add_argument("--workers", type=positive_int, default=1, help=HELP_WORKERS)
    parser.add_argument("--progress", action="store_true", help=HELP_PROGRESS)
    parser.add_argument("--out", default=None, help="Where the binary PPM image is written.").completer = (
        FilesCompleter(allowednames=("ppm",))
    )
    parser.add_argument(
        "--print",
        action="store_true",
        help="Print the resolved scene and camera configuration following a tree structure and exit.",
    )


def get_parser(subparser=None) -> ArgumentParser:
    parser_kwargs = dict(
        name="render-image",
        description="render an orthographic image of a procedural scene to a PPM file",
        help="Render an orthographic image of a procedural scene to a PPM file.",
    )
    parser = (subparser.add_parser if subparser is not None else ArgumentParser)(**parser_kwargs)

    populate_parser(parser)

    return parser


def parse_args():
    return get_parser().parse_args()


def main(args) -> int:
    from omegaconf import OmegaConf

    from volren.medium.piecewise import Placement
    from volren.scripts.render.image import OrthographicCamera, image_main
    from volren.scripts.render.scene import build_field, load_camera_config, load_scene_config

    scene_cfg, sources = load_scene_config(args.scene, args.params)
    camera_cfg, camera_sources = load_camera_config(args.camera)

    if args.print:
        from volren.utils.rich_config import print_config

        cfg = OmegaConf.merge({"field": scene_cfg.field}, camera_cfg)
        print_config(cfg, {**sources, **camera_sources}, tree_label=f"<scene {args.scene}>")
        return 0

    if args.out is None:
        raise ValueError("--out is required unless --print is given")

    width, height = args.res
    image_main(
        build_field(scene_cfg),
        OrthographicCamera.from_config(camera_cfg),
        width,
        height,
        args.samples,
        args.out,
        placement=Placement.stratified(args.seed) if args.stratified else Placement.uniform(),
        background=args.background,
        workers=args.workers,
        progress=args.progress,
    )
    return 0


if __name__ == "__main__":
    main(parse_args())
