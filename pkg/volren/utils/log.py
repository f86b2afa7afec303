import logging
from typing import Optional

_loggers = {}


def get_project_logger(module_name: str) -> logging.Logger:
    return _loggers.setdefault(module_name, logging.getLogger(module_name))


def setup_cli_logging(verbose: bool = False, level: Optional[int] = None) -> None:
    """
    Route volren's log records to a single rich handler on stderr, so that stdout only carries command output.
    """
    from rich.console import Console
    from rich.logging import RichHandler

    root = logging.getLogger("volren")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.addHandler(
        RichHandler(console=Console(stderr=True), show_path=False, markup=False)
    )
    if level is None:
        level = logging.INFO if verbose else logging.WARNING
    root.setLevel(level)
    root.propagate = False
