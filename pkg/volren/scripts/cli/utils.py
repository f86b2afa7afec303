from argparse import ArgumentTypeError
from typing import List, Tuple

from volren.utils.commons import split_params


def _floats(text: str, expected: int, what: str) -> Tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != expected:
        raise ArgumentTypeError(f"{what} must be {expected} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(part) for part in parts)
    except ValueError:
        raise ArgumentTypeError(f"{what} must be {expected} comma-separated numbers, got {text!r}")


def parse_rgb(text: str) -> Tuple[float, float, float]:
    return _floats(text, 3, "color")


def parse_resolution(text: str) -> Tuple[int, int]:
    """
    "WxH" -> (W, H).
    """
    try:
        width, height = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise ArgumentTypeError(f"resolution must look like WIDTHxHEIGHT, got {text!r}")
    if width < 1 or height < 1:
        raise ArgumentTypeError(f"resolution must be positive, got {text!r}")
    return width, height


def parse_int_list(text: str) -> List[int]:
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError:
        raise ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if any(v < 1 for v in values):
        raise ArgumentTypeError(f"segment counts must be >= 1, got {text!r}")
    return values


def parse_params(text: str) -> List[str]:
    try:
        return split_params(text)
    except ValueError as e:
        raise ArgumentTypeError(str(e))


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value


def autocomplete_scene(prefix: str, **kwargs):
    from argcomplete.completers import FilesCompleter

    from volren.scripts.render.scene import available_scenes

    if "/" in prefix or prefix.endswith((".yaml", ".yml")):
        return FilesCompleter(allowednames=("yaml", "yml"))(prefix)
    return [scene for scene in available_scenes() if scene.startswith(prefix)]
