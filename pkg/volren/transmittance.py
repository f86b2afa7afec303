"""
Transmittance, optical depth and the ray-termination distribution of a piecewise-constant medium.

Optical depth is accumulated as a sum and exponentiated once. Depths above SATURATION_DEPTH give a transmittance of
exactly 0 instead of an underflowing exp.
"""
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from volren.errors import DomainError
from volren.medium.piecewise import PiecewiseMedium
from volren.utils.log import get_project_logger

logger = get_project_logger(__name__)

SATURATION_DEPTH = 700.0


class OpticalDepth(float):
    """
    Dimensionless integral of density over an interval; a finite, non-negative float.
    """

    def __new__(cls, value: float):
        value = float(value)
        if not np.isfinite(value) or value < 0:
            raise DomainError(f"optical depth must be finite and >= 0, got {value!r}")
        return super().__new__(cls, value)


def attenuate(depth):
    """
    exp(-depth) with depths above SATURATION_DEPTH mapped to 0. Works on scalars and arrays.
    """
    depth = np.asarray(depth, dtype=np.float64)
    saturated = depth > SATURATION_DEPTH
    if np.any(saturated):
        logger.debug(f"optical depth saturated above {SATURATION_DEPTH}")
    out = np.where(saturated, 0.0, np.exp(-np.minimum(depth, SATURATION_DEPTH)))
    return float(out) if out.ndim == 0 else out


def optical_depth_profile(medium: PiecewiseMedium) -> np.ndarray:
    """
    Cumulative optical depth tau_1..tau_{N+1} at the boundaries, tau_1 = 0.
    """
    return np.concatenate([[0.0], np.cumsum(medium.sigmas * medium.deltas)])


def transmittance_profile(medium: PiecewiseMedium) -> np.ndarray:
    """
    Prefix transmittances T_1..T_{N+1}; the last entry is the residual transmittance.
    """
    return attenuate(optical_depth_profile(medium))


def _check_interval(medium: PiecewiseMedium, a: float, b: float):
    medium.check_domain(a, b)
    if a > b:
        raise DomainError(f"interval start {a!r} is past its end {b!r}")


def optical_depth(medium: PiecewiseMedium, a: float, b: float) -> OpticalDepth:
    _check_interval(medium, a, b)
    starts, ends = medium.boundaries[:-1], medium.boundaries[1:]
    overlap = np.clip(np.minimum(ends, b) - np.maximum(starts, a), 0.0, None)
    return OpticalDepth(np.sum(medium.sigmas * overlap))


def transmittance(medium: PiecewiseMedium, a: float, b: float) -> float:
    return attenuate(optical_depth(medium, a, b))


def depth_at(medium: PiecewiseMedium, ts) -> np.ndarray:
    """
    Optical depth from t_1 to each t, vectorized. No domain check.
    """
    ts = np.asarray(ts, dtype=np.float64)
    index = np.clip(
        np.searchsorted(medium.boundaries, ts, side="right") - 1,
        0,
        medium.n_segments - 1,
    )
    profile = optical_depth_profile(medium)
    return profile[index] + medium.sigmas[index] * (ts - medium.boundaries[index])


def transmittance_ratio(medium: PiecewiseMedium, a: float, b: float) -> float:
    """
    T(a -> b) computed as T(b) / T(a), both measured from t_1, in log space.
    """
    _check_interval(medium, a, b)
    tau_a, tau_b = depth_at(medium, [a, b])
    return attenuate(max(tau_b - tau_a, 0.0))


def prefix_transmittance(medium: PiecewiseMedium, n: int) -> float:
    """
    T_n = exp(-sum_{k<n} sigma_k delta_k) for 1 <= n <= N + 1; n = N + 1 gives the residual transmittance.
    """
    if not 1 <= n <= medium.n_segments + 1:
        raise DomainError(
            f"segment number must be in [1, {medium.n_segments + 1}], got {n}"
        )
    return attenuate(optical_depth_profile(medium)[n - 1])


def opacity(medium: PiecewiseMedium, t: float) -> float:
    """
    1 - T(t): probability that the ray terminates before t.
    """
    medium.check_domain(t)
    return float(-np.expm1(-depth_at(medium, t)))


def opacity_curve(medium: PiecewiseMedium, ts) -> np.ndarray:
    ts = np.asarray(ts, dtype=np.float64)
    medium.check_domain(float(np.min(ts)), float(np.max(ts)))
    return -np.expm1(-depth_at(medium, ts))


def hit_pdf(medium: PiecewiseMedium, t: float) -> float:
    """
    T(t) * sigma(t). On an interior boundary the right-hand segment is used; at t_{N+1} the last one.
    """
    n = medium.segment_of(t)
    return attenuate(depth_at(medium, t)) * float(medium.sigmas[n - 1])


@dataclass(frozen=True)
class Hit:
    t: float
    segment: int


@dataclass(frozen=True)
class Escaped:
    pass


ESCAPED = Escaped()

Termination = Union[Hit, Escaped]


def sample_terminations(
    medium: PiecewiseMedium, u: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Inverse-CDF sampling of the termination distance for an array of uniform variates in [0, 1).

    Returns hit distances (NaN where the ray escapes) and 1-based segment numbers (0 where it escapes). Segments
    with zero density carry no CDF mass and are never selected.
    """
    u = np.asarray(u, dtype=np.float64)
    if np.any((u < 0) | (u >= 1)) or not np.all(np.isfinite(u)):
        raise DomainError("uniform variates must lie in [0, 1)")

    profile = optical_depth_profile(medium)
    cdf = -np.expm1(-profile)
    escaped = u >= cdf[-1]

    segment = np.searchsorted(cdf, u, side="right")
    segment = np.where(escaped, 0, segment)
    index = np.clip(segment - 1, 0, medium.n_segments - 1)

    sigma = medium.sigmas[index]
    start = medium.boundaries[index]
    with np.errstate(divide="ignore", invalid="ignore"):
        offset = (-np.log1p(-u) - profile[index]) / sigma
    offset = np.clip(offset, 0.0, medium.deltas[index])
    t = np.minimum(start + offset, medium.boundaries[index + 1])
    t = np.where(escaped, np.nan, t)
    return t, segment.astype(np.int64)


def sample_termination(medium: PiecewiseMedium, u: float) -> Termination:
    if not 0.0 <= u < 1.0:
        raise DomainError(f"u must lie in [0, 1), got {u!r}")
    t, segment = sample_terminations(medium, np.array([u]))
    if segment[0] == 0:
        return ESCAPED
    return Hit(t=float(t[0]), segment=int(segment[0]))
