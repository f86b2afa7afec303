"""
Orthographic images of a field: one ray per pixel, each rendered with the piecewise-constant estimator.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from omegaconf import DictConfig, OmegaConf
from tqdm import tqdm

from volren.errors import DomainError, SceneError
from volren.medium.fields import Field
from volren.medium.piecewise import Placement
from volren.medium.ray import Ray, Vector
from volren.quadrature import render_rays
from volren.utils.commons import chunks
from volren.utils.file import ensure_parent_dir
from volren.utils.log import get_project_logger
from volren.utils.ppm import write_ppm

logger = get_project_logger(__name__)


@dataclass(frozen=True)
class OrthographicCamera:
    """
    Axis-aligned view box: pixel (i, j) looks along +z through x = x_min + (i + 1/2) (x_max - x_min) / width and
    y = y_max - (j + 1/2) (y_max - y_min) / height, from z_near to z_far. Row 0 is the top of the image.
    """

    x_min: float = -1.0
    x_max: float = 1.0
    y_min: float = -1.0
    y_max: float = 1.0
    z_near: float = -1.5
    z_far: float = 1.5

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DomainError(f"empty view box: {self}")
        if not self.z_near < self.z_far:
            raise DomainError(f"z_near must be smaller than z_far, got {self.z_near} >= {self.z_far}")

    @classmethod
    def from_config(cls, cfg: DictConfig) -> "OrthographicCamera":
        params = OmegaConf.to_container(cfg.camera, resolve=True)
        try:
            return cls(**{k: float(v) for k, v in params.items()})
        except (TypeError, ValueError) as e:
            raise SceneError(f"bad camera parameters {params}: {e}") from e

    def rays(self, width: int, height: int) -> List[Ray]:
        """
        Row-major list of pixel rays, top row first.
        """
        if width < 1 or height < 1:
            raise DomainError(f"resolution must be positive, got {width}x{height}")
        xs = self.x_min + (np.arange(width) + 0.5) * (self.x_max - self.x_min) / width
        ys = self.y_max - (np.arange(height) + 0.5) * (self.y_max - self.y_min) / height
        length = self.z_far - self.z_near
        return [
            Ray((x, y, self.z_near), (0.0, 0.0, 1.0), 0.0, length) for y in ys for x in xs
        ]


def render_image(
    field: Field,
    camera: OrthographicCamera,
    width: int,
    height: int,
    n_segments: int,
    placement: Optional[Placement] = None,
    background: Optional[Vector] = None,
    workers: int = 1,
    progress: bool = False,
) -> np.ndarray:
    """
    (height, width, 3) image. Pixel p = j * width + i uses stream p for stratified placement, and rows are
    assembled in order, so the image does not depend on the number of workers.
    """
    rows = list(chunks(camera.rays(width, height), width))

    def render_row(j: int) -> np.ndarray:
        return render_rays(field, rows[j], n_segments, placement, background, first_stream=j * width)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        image = list(
            tqdm(executor.map(render_row, range(height)), total=height, desc="Rendering", disable=not progress)
        )
    return np.stack(image, axis=0)


def image_main(
    field: Field,
    camera: OrthographicCamera,
    width: int,
    height: int,
    n_segments: int,
    output_path: str,
    placement: Optional[Placement] = None,
    background: Optional[Vector] = None,
    workers: int = 1,
    progress: bool = False,
):
    image = render_image(field, camera, width, height, n_segments, placement, background, workers, progress)
    write_ppm(image, ensure_parent_dir(output_path))
    logger.info(f"Wrote {width}x{height} image to {output_path}")
