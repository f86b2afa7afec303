"""
Continuous density/emission fields.

A field maps a batch of positions (M, 3) to densities (M,) and colors (M, 3). Built-in fields register themselves
under a scene name so the CLI can resolve them, in the same way data drivers are registered by task and extension.
"""
from typing import Dict, Mapping, Optional, Sequence, Tuple, Type, Union

import numpy as np

from volren.errors import DomainError, FieldEvaluationError, SceneError
from volren.medium.ray import Ray, Vector, ray_point

RGB = np.ndarray


def as_color(value: Vector, name: str = "color") -> np.ndarray:
    color = np.array(value, dtype=np.float64).reshape(-1)
    if color.shape != (3,):
        raise DomainError(f"{name} must be an RGB triple, got shape {color.shape}")
    if not np.all(np.isfinite(color)) or np.any(color < 0) or np.any(color > 1):
        raise DomainError(f"{name} must lie in [0, 1], got {color.tolist()}")
    color.flags.writeable = False
    return color


class Field:
    _registry: Dict[str, Type["Field"]] = {}

    @classmethod
    def register(cls, name: str):
        def _register(field_class: Type["Field"]):
            if name in Field._registry:
                raise ValueError(
                    f"Scene '{name}' already registered: found {Field._registry[name]}"
                )
            Field._registry[name] = field_class
            return field_class

        return _register

    @classmethod
    def from_name(cls, name: str, **params) -> "Field":
        if name not in Field._registry:
            raise SceneError(
                f"Unknown scene '{name}'. Available scenes are: {sorted(Field._registry)}"
            )
        try:
            return Field._registry[name](**params)
        except TypeError as e:
            raise SceneError(f"Bad parameters for scene '{name}': {e}") from e

    @classmethod
    def available(cls) -> Sequence[str]:
        return sorted(Field._registry)

    def evaluate(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def closed_form(self, ray: Ray, background: Optional[RGB] = None) -> Optional[RGB]:
        """
        Exact expected color along the ray when the field admits one, None otherwise.
        """
        return None

    def evaluate_checked(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        sigma, color = self.evaluate(points)
        sigma = np.asarray(sigma, dtype=np.float64).reshape(-1)
        color = np.asarray(color, dtype=np.float64).reshape(-1, 3)
        if not np.all(np.isfinite(sigma)):
            bad = int(np.argmin(np.isfinite(sigma)))
            raise FieldEvaluationError(
                f"{type(self).__name__} returned non-finite density {sigma[bad]!r} at {points[bad].tolist()}"
            )
        if np.any(sigma < 0):
            bad = int(np.argmax(sigma < 0))
            raise FieldEvaluationError(
                f"{type(self).__name__} returned negative density {sigma[bad]!r} at {points[bad].tolist()}"
            )
        inside = np.all((color >= 0) & (color <= 1), axis=1)
        if not np.all(inside):
            bad = int(np.argmin(inside))
            raise FieldEvaluationError(
                f"{type(self).__name__} returned color {color[bad].tolist()} outside [0, 1] at {points[bad].tolist()}"
            )
        return sigma, color


@Field.register("constant")
class ConstantField(Field):
    def __init__(self, sigma: float, color: Vector = (1.0, 1.0, 1.0)):
        if not np.isfinite(sigma) or sigma < 0:
            raise SceneError(f"constant field density must be finite and >= 0, got {sigma!r}")
        self.sigma = float(sigma)
        self.color = as_color(color)

    def evaluate(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        m = points.shape[0]
        return np.full(m, self.sigma), np.broadcast_to(self.color, (m, 3)).copy()

    def closed_form(self, ray: Ray, background: Optional[RGB] = None) -> Optional[RGB]:
        from volren.renderer import render_homogeneous

        color = render_homogeneous(self.sigma, self.color, ray.t_near, ray.t_far)
        if background is not None:
            color = color + np.exp(-self.sigma * ray.length) * as_color(background)
        return color


@Field.register("step")
class StepField(Field):
    """
    Axis-aligned step: sigma_before / color_before where x[axis] < position, sigma_after / color_after elsewhere.
    """

    def __init__(
        self,
        position: float,
        sigma_after: float,
        sigma_before: float = 0.0,
        axis: int = 2,
        color_after: Vector = (1.0, 1.0, 1.0),
        color_before: Vector = (1.0, 1.0, 1.0),
    ):
        if axis not in (0, 1, 2):
            raise SceneError(f"step axis must be 0, 1 or 2, got {axis!r}")
        for name, value in (("sigma_before", sigma_before), ("sigma_after", sigma_after)):
            if not np.isfinite(value) or value < 0:
                raise SceneError(f"step field {name} must be finite and >= 0, got {value!r}")
        self.position = float(position)
        self.axis = int(axis)
        self.sigma_before = float(sigma_before)
        self.sigma_after = float(sigma_after)
        self.color_before = as_color(color_before, "color_before")
        self.color_after = as_color(color_after, "color_after")

    def evaluate(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        after = points[:, self.axis] >= self.position
        sigma = np.where(after, self.sigma_after, self.sigma_before)
        color = np.where(after[:, None], self.color_after[None, :], self.color_before[None, :])
        return sigma, color


@Field.register("blob")
class GaussianBlobField(Field):
    """
    Isotropic Gaussian blob: sigma(x) = sigma0 * exp(-|x - center|^2 / (2 s^2)), constant color.
    """

    def __init__(
        self,
        sigma0: float,
        center: Vector = (0.0, 0.0, 0.0),
        scale: float = 0.5,
        color: Vector = (1.0, 1.0, 1.0),
    ):
        if not np.isfinite(sigma0) or sigma0 < 0:
            raise SceneError(f"blob sigma0 must be finite and >= 0, got {sigma0!r}")
        if not np.isfinite(scale) or scale <= 0:
            raise SceneError(f"blob scale must be positive, got {scale!r}")
        self.sigma0 = float(sigma0)
        self.center = np.array(center, dtype=np.float64).reshape(3)
        self.scale = float(scale)
        self.color = as_color(color)

    def density(self, points: np.ndarray) -> np.ndarray:
        squared = np.sum((points - self.center[None, :]) ** 2, axis=-1)
        return self.sigma0 * np.exp(-squared / (2.0 * self.scale**2))

    def evaluate(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.density(points), np.broadcast_to(self.color, (points.shape[0], 3)).copy()


@Field.register("blobs")
class BlobsField(Field):
    """
    Sum of Gaussian blobs, given as blob fields or as their keyword parameters. Density adds up; color is the
    density-weighted mix of the blob colors.
    """

    def __init__(self, blobs: Sequence[Union[GaussianBlobField, Mapping]]):
        blobs = [
            GaussianBlobField(**blob) if isinstance(blob, Mapping) else blob
            for blob in blobs
        ]
        if len(blobs) == 0:
            raise SceneError("blobs scene needs at least one blob")
        for blob in blobs:
            if not isinstance(blob, GaussianBlobField):
                raise SceneError(f"blobs scene expects blob fields, got {type(blob).__name__}")
        self.blobs = blobs

    def evaluate(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        densities = np.stack([blob.density(points) for blob in self.blobs], axis=0)
        colors = np.stack([blob.color for blob in self.blobs], axis=0)
        sigma = densities.sum(axis=0)
        weighted = np.einsum("km,kc->mc", densities, colors)
        # where no blob contributes, fall back to the plain average color
        fallback = colors.mean(axis=0)
        with np.errstate(invalid="ignore", divide="ignore"):
            color = np.where(sigma[:, None] > 0, weighted / sigma[:, None], fallback[None, :])
        return sigma, np.clip(color, 0.0, 1.0)


class PiecewiseField(Field):
    """
    A piecewise-constant medium lifted back to a field along a ray: the density at a point is the one of the
    segment containing its ray parameter (right-continuous), zero outside the medium.
    """

    def __init__(self, medium, ray: Ray):
        self.medium = medium
        self.ray = ray

    def evaluate(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        ts = (points - self.ray.origin[None, :]) @ self.ray.direction
        boundaries = self.medium.boundaries
        index = np.searchsorted(boundaries, ts, side="right") - 1
        inside = (index >= 0) & (index < self.medium.n_segments)
        index = np.clip(index, 0, self.medium.n_segments - 1)
        sigma = np.where(inside, self.medium.sigmas[index], 0.0)
        color = np.where(inside[:, None], self.medium.colors[index], 0.0)
        return sigma, color


def sample_field(field: Field, ray: Ray, t: float) -> Tuple[float, np.ndarray]:
    point = ray_point(ray, t)
    sigma, color = field.evaluate_checked(point[None, :])
    return float(sigma[0]), color[0]
