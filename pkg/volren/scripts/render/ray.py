"""
render-ray output, one CSV block per quantity:

    r,g,b
    <color>
    n,weight,alpha
    <one row per segment, n counted from 1>
    residual,<residual transmittance>

Floats are written with repr so they read back bit-exactly.
"""
from typing import List, Optional

from volren.medium.io import format_float, read_medium_csv
from volren.medium.piecewise import PiecewiseMedium
from volren.medium.ray import Vector
from volren.renderer import RenderOutput, compute_alphas, render_alpha, render_piecewise
from volren.utils.log import get_project_logger

logger = get_project_logger(__name__)

DENSITY = "density"
ALPHA = "alpha"


def render_medium(
    medium: PiecewiseMedium, background: Optional[Vector] = None, form: str = DENSITY
) -> RenderOutput:
    if form == DENSITY:
        return render_piecewise(medium, background)
    if form == ALPHA:
        return render_alpha(compute_alphas(medium.sigmas, medium.deltas), medium.colors, background)
    raise ValueError(f"form must be '{DENSITY}' or '{ALPHA}', got '{form}'")


def format_render_output(output: RenderOutput) -> str:
    lines: List[str] = ["r,g,b", ",".join(format_float(c) for c in output.color)]
    lines.append("n,weight,alpha")
    for n, (weight, alpha) in enumerate(zip(output.weights, output.alphas), start=1):
        lines.append(f"{n},{format_float(weight)},{format_float(alpha)}")
    lines.append(f"residual,{format_float(output.residual_transmittance)}")
    return "\n".join(lines) + "\n"


def render_ray_main(medium_path: str, background: Optional[Vector] = None, form: str = DENSITY) -> str:
    medium = read_medium_csv(medium_path)
    logger.info(f"Read {medium.n_segments} segments from {medium_path}")
    return format_render_output(render_medium(medium, background, form))
