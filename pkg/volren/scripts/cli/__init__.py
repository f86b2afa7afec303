from argparse import ArgumentParser
from pathlib import Path
from typing import List, Optional

import argcomplete

from volren.utils.log import get_project_logger, setup_cli_logging

logger = get_project_logger(__name__)

# exit codes
EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2


def get_commands():
    from volren.scripts.cli.convergence import get_parser as convergence_parser
    from volren.scripts.cli.convergence import main as convergence_main
    from volren.scripts.cli.render_image import get_parser as render_image_parser
    from volren.scripts.cli.render_image import main as render_image_main
    from volren.scripts.cli.render_ray import get_parser as render_ray_parser
    from volren.scripts.cli.render_ray import main as render_ray_main
    from volren.scripts.cli.validate import get_parser as validate_parser
    from volren.scripts.cli.validate import main as validate_main

    commands = {
        "render-ray": dict(
            parser=render_ray_parser,
            main=render_ray_main,
        ),
        "render-image": dict(
            parser=render_image_parser,
            main=render_image_main,
        ),
        "validate": dict(
            parser=validate_parser,
            main=validate_main,
        ),
        "convergence": dict(
            parser=convergence_parser,
            main=convergence_main,
        ),
    }

    return commands


def parse_args(commands: dict, argv: Optional[List[str]] = None):

    parser = ArgumentParser(prog="volren")

    grp = parser.add_mutually_exclusive_group()

    grp.add_argument(
        "--install-autocomplete",
        action="store_true",
        help="Installs volren's autocomplete (currently works with bash and zsh only)",
    )

    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress information on stderr.")

    subcmds = parser.add_subparsers(dest="action", required=False)
    for action_name, action_data in commands.items():
        action_data["parser"](subcmds)

    argcomplete.autocomplete(parser, default_completer=None, always_complete_options="long")

    return parser.parse_args(argv)


def install_autocomplete():
    import os

    prefix = os.getenv("CONDA_PREFIX")
    if prefix is None:
        print("CONDA_PREFIX unset. Are you sure you are executing this within a conda environment?")
        return

    if "envs" not in prefix:
        print("CONDA_PREFIX does not appear to be an environment of conda.")
        print("Are you sure you are executing this within a conda environment (not the base env)?")
        print(f"   CONDA_PREFIX={prefix}")
        return

    path = Path(prefix)
    script_path = path / "etc/conda/activate.d/volren-complete.sh"
    if script_path.exists():
        print("Autocomplete already installed! Exiting...")
        return

    script_path.parent.mkdir(parents=True, exist_ok=True)

    # works with bash and zsh (if bashcompinit is enabled)
    with script_path.open("w") as f:
        s = 'eval "$(register-python-argcomplete volren)"'
        print(s, file=f)

    print("Autocompletion installed, enjoy volren! :)")


def main(argv: Optional[List[str]] = None) -> int:
    commands = get_commands()
    args = parse_args(commands, argv)

    if args.install_autocomplete:
        install_autocomplete()
        return EXIT_OK

    if args.action is None:
        print(
            "No action has been provided. Execute `volren --install-autocomplete` "
            "to install volren's shell completion or `volren -h` for help"
        )
        return EXIT_USAGE

    setup_cli_logging(verbose=args.verbose)

    # run command
    try:
        return commands[args.action]["main"](args)
    except (ValueError, OSError, ModuleNotFoundError) as e:
        logger.error(str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    import sys

    sys.exit(main())
