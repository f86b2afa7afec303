from typing import List, Optional, Sequence

from volren.medium.fields import Field
from volren.medium.piecewise import Placement
from volren.medium.ray import Ray, Vector
from volren.quadrature import ConvergenceRow, convergence_table, write_convergence_csv
from volren.utils.file import ensure_parent_dir
from volren.utils.log import get_project_logger

logger = get_project_logger(__name__)


def convergence_main(
    field: Field,
    ray: Ray,
    n_list: Sequence[int],
    output_path: str,
    reference_steps: int,
    placement: Optional[Placement] = None,
    background: Optional[Vector] = None,
    timing: bool = True,
    plot_path: Optional[str] = None,
    progress: bool = False,
) -> List[ConvergenceRow]:
    rows = convergence_table(
        field,
        ray,
        n_list,
        background=background,
        reference_steps=reference_steps,
        placement=placement,
        timing=timing,
        progress=progress,
    )
    write_convergence_csv(rows, ensure_parent_dir(output_path))

    if plot_path is not None:
        from volren.utils.plotly import write_convergence_html

        write_convergence_html(rows, str(ensure_parent_dir(plot_path)), title=type(field).__name__)
        logger.info(f"Wrote convergence plot to {plot_path}")

    return rows
