"""
Numeric evaluation of the continuous rendering integral along a ray.

integrate_ray is the piecewise-constant estimator (discretize, then render_piecewise). riemann_reference is a
brute-force Riemann sum coded separately from the renderer, used as the oracle the estimator is measured against.
"""
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from volren.errors import DomainError
from volren.medium.fields import Field
from volren.medium.io import format_float
from volren.medium.piecewise import Placement, discretize
from volren.medium.ray import Ray, Vector
from volren.renderer import RenderOutput, render_piecewise, resolve_background
from volren.utils.log import get_project_logger

logger = get_project_logger(__name__)

MIDPOINT = "midpoint"
LEFT = "left"

DEFAULT_REFERENCE_STEPS = 10**6

CONVERGENCE_CSV_HEADER = "n,err_r,err_g,err_b,err_max,seconds"


def integrate_ray(
    field: Field,
    ray: Ray,
    n_segments: int,
    placement: Optional[Placement] = None,
    background: Optional[Vector] = None,
    stream: int = 0,
) -> RenderOutput:
    return render_piecewise(discretize(field, ray, n_segments, placement, stream), background)


def render_rays(
    field: Field,
    rays: Sequence[Ray],
    n_segments: int,
    placement: Optional[Placement] = None,
    background: Optional[Vector] = None,
    first_stream: int = 0,
) -> np.ndarray:
    """
    Colors of many rays, shape (R, 3). Ray r draws its stratified offsets from stream first_stream + r.
    """
    colors = np.zeros((len(rays), 3))
    for r, ray in enumerate(rays):
        colors[r] = integrate_ray(
            field, ray, n_segments, placement, background, first_stream + r
        ).color
    return colors


def riemann_reference(
    field: Field,
    ray: Ray,
    n_steps: int,
    background: Optional[Vector] = None,
    rule: str = MIDPOINT,
    chunk: int = 2**16,
) -> np.ndarray:
    """
    Riemann sum of T(t) sigma(t) c(t) dt over [t_near, t_far] with n_steps equal steps, plus T(t_far) * background.

    With rule="left" the integrand is sampled at the left end of each step and T is the transmittance accumulated
    up to it. With rule="midpoint" (default) sigma and c are sampled at the step centre and T is taken at the centre
    as well. Steps are processed in chunks so memory stays bounded for large n_steps.
    """
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps}")
    if rule not in (MIDPOINT, LEFT):
        raise DomainError(f"rule must be '{MIDPOINT}' or '{LEFT}', got '{rule}'")

    h = ray.length / n_steps
    offset = 0.5 if rule == MIDPOINT else 0.0
    accumulated = 0.0
    color = np.zeros(3)

    for start in range(0, n_steps, chunk):
        steps = np.arange(start, min(start + chunk, n_steps), dtype=np.float64)
        sigma, c = field.evaluate_checked(ray.points(ray.t_near + (steps + offset) * h))
        depths = sigma * h
        running = np.cumsum(depths)
        before = accumulated + running - depths
        if rule == MIDPOINT:
            before = before + 0.5 * depths
        t = np.exp(-before)
        color += (t * depths) @ c
        accumulated += float(running[-1])

    if background is not None:
        color += np.exp(-accumulated) * resolve_background(background)
    return color


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    errors: np.ndarray
    err_max: float
    seconds: float


def _check_n_list(n_list: Sequence[int]) -> List[int]:
    n_list = [int(n) for n in n_list]
    if len(n_list) == 0:
        raise DomainError("n_list must not be empty")
    if any(n < 1 for n in n_list):
        raise DomainError(f"segment counts must be >= 1, got {n_list}")
    if any(a > b for a, b in zip(n_list, n_list[1:])):
        raise DomainError(f"n_list must be sorted, got {n_list}")
    return n_list


def convergence_table(
    field: Field,
    ray: Ray,
    n_list: Sequence[int],
    background: Optional[Vector] = None,
    reference_steps: int = DEFAULT_REFERENCE_STEPS,
    placement: Optional[Placement] = None,
    timing: bool = True,
    progress: bool = False,
) -> List[ConvergenceRow]:
    """
    Absolute error of integrate_ray for every n in n_list, against the field's closed form when it has one and
    against riemann_reference(reference_steps) otherwise. With timing=False the seconds column is 0.0.
    """
    n_list = _check_n_list(n_list)

    reference = field.closed_form(ray, background)
    if reference is None:
        logger.info(f"Computing Riemann reference with {reference_steps} steps")
        reference = riemann_reference(field, ray, reference_steps, background)
    else:
        logger.info("Using closed-form reference")

    rows = []
    for n in tqdm(n_list, desc="Sweeping", disable=not progress):
        start = time.perf_counter()
        color = integrate_ray(field, ray, n, placement, background).color
        seconds = time.perf_counter() - start if timing else 0.0
        errors = np.abs(color - reference)
        rows.append(ConvergenceRow(n=n, errors=errors, err_max=float(errors.max()), seconds=seconds))
        logger.debug(f"n={n}: err_max={rows[-1].err_max!r}")
    return rows


def empirical_order(rows: Sequence[ConvergenceRow]) -> Optional[float]:
    """
    Order p of err_max ~ n^-p, fitted by least squares in log-log space over rows with non-zero error. None when
    fewer than two such rows (with distinct n) exist.
    """
    usable = [row for row in rows if row.err_max > 0]
    if len({row.n for row in usable}) < 2:
        return None
    log_n = np.log([row.n for row in usable])
    log_err = np.log([row.err_max for row in usable])
    slope, _ = np.polyfit(log_n, log_err, 1)
    return float(-slope)


def format_convergence_csv(rows: Sequence[ConvergenceRow]) -> str:
    lines = [CONVERGENCE_CSV_HEADER]
    for row in rows:
        values = [*row.errors, row.err_max, row.seconds]
        lines.append(",".join([str(row.n)] + [format_float(v) for v in values]))
    return "\n".join(lines) + "\n"


def write_convergence_csv(rows: Sequence[ConvergenceRow], path: Union[str, Path]):
    Path(path).write_text(format_convergence_csv(rows))
    logger.info(f"Wrote {len(rows)} convergence rows to {path}")
