from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from volren.errors import DomainError

UNIT_NORM_TOLERANCE = 1e-9

Vector = Union[Sequence[float], np.ndarray]


def _as_vector(value: Vector, name: str) -> np.ndarray:
    array = np.array(value, dtype=np.float64).reshape(-1)
    if array.shape != (3,):
        raise DomainError(f"{name} must be a 3-vector, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise DomainError(f"{name} must be finite, got {array.tolist()}")
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Ray:
    """
    A ray r(t) = origin + t * direction restricted to [t_near, t_far].

    direction must already be unit length (within 1e-9); use Ray.towards to build one from an unnormalized vector.
    """

    origin: np.ndarray
    direction: np.ndarray
    t_near: float
    t_far: float

    def __post_init__(self):
        object.__setattr__(self, "origin", _as_vector(self.origin, "origin"))
        object.__setattr__(self, "direction", _as_vector(self.direction, "direction"))
        object.__setattr__(self, "t_near", float(self.t_near))
        object.__setattr__(self, "t_far", float(self.t_far))

        norm = float(np.linalg.norm(self.direction))
        if abs(norm - 1.0) > UNIT_NORM_TOLERANCE:
            raise DomainError(f"ray direction must have unit norm, got |d|={norm!r}")
        if not (np.isfinite(self.t_near) and np.isfinite(self.t_far)):
            raise DomainError("ray bounds must be finite")
        if self.t_near < 0:
            raise DomainError(f"t_near must be non-negative, got {self.t_near!r}")
        if not self.t_near < self.t_far:
            raise DomainError(
                f"t_near must be smaller than t_far, got [{self.t_near!r}, {self.t_far!r}]"
            )

    @classmethod
    def towards(
        cls, origin: Vector, direction: Vector, t_near: float, t_far: float
    ) -> "Ray":
        direction = np.asarray(direction, dtype=np.float64)
        norm = np.linalg.norm(direction)
        if norm == 0:
            raise DomainError("ray direction must be non-zero")
        return cls(origin, direction / norm, t_near, t_far)

    @property
    def length(self) -> float:
        return self.t_far - self.t_near

    def contains(self, t: float) -> bool:
        return self.t_near <= t <= self.t_far

    def points(self, ts: np.ndarray) -> np.ndarray:
        """
        Positions at an array of ray parameters, shape (M, 3). No bounds check.
        """
        ts = np.asarray(ts, dtype=np.float64).reshape(-1, 1)
        return self.origin[None, :] + ts * self.direction[None, :]


def ray_point(ray: Ray, t: float) -> np.ndarray:
    if not ray.contains(t):
        raise DomainError(
            f"t={t!r} is outside the ray bounds [{ray.t_near!r}, {ray.t_far!r}]"
        )
    return ray.origin + t * ray.direction
