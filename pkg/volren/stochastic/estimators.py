"""
Monte Carlo estimates of the expected ray color by simulating where rays terminate.

Samples are split into fixed-size blocks, one Philox stream per block. Blocks may run on several worker threads.
Their moments are merged in stream order, so results are bit-identical for any number of workers.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np
from tqdm import tqdm

from volren.errors import DomainError
from volren.medium.piecewise import PiecewiseMedium
from volren.medium.ray import Vector
from volren.renderer import resolve_background
from volren.stochastic.rng import block_layout, stream_uniforms
from volren.transmittance import opacity_curve, sample_terminations
from volren.utils.log import get_project_logger

logger = get_project_logger(__name__)


@dataclass(frozen=True)
class EstimateStats:
    mean: np.ndarray
    standard_error: np.ndarray
    n_samples: int
    escape_fraction: float
    depth_mean: float = 0.0
    depth_standard_error: float = 0.0

    def z_scores(self, expected: Vector) -> np.ndarray:
        """
        (mean - expected) / standard_error per channel; 0 when both are 0, +-inf when only the error is 0.
        """
        diff = self.mean - np.asarray(expected, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = diff / self.standard_error
        return np.where(diff == 0, 0.0, z)


@dataclass
class _Moments:
    count: int
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def of(cls, values: np.ndarray) -> "_Moments":
        # shifted by the first sample: constant blocks give their value and zero spread exactly
        shifted = values - values[0]
        offset = shifted.mean(axis=0)
        return cls(values.shape[0], values[0] + offset, ((shifted - offset) ** 2).sum(axis=0))

    def merge(self, other: "_Moments") -> "_Moments":
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / count)
        m2 = self.m2 + other.m2 + delta**2 * (self.count * other.count / count)
        return _Moments(count, mean, m2)

    @property
    def standard_error(self) -> np.ndarray:
        return np.sqrt(self.m2 / (self.count - 1) / self.count)


def _run_blocks(fn, layout, workers: int, progress: bool, desc: str) -> Iterator:
    def monitored(iterator):
        return tqdm(iterator, total=len(layout), desc=desc) if progress else iterator

    if workers <= 1:
        yield from monitored(map(fn, layout))
        return
    # map keeps submission order, so blocks come back sorted by stream index
    with ThreadPoolExecutor(max_workers=workers) as executor:
        yield from monitored(executor.map(fn, layout))


def _check_samples(n_samples: int, minimum: int = 1):
    if n_samples < minimum:
        raise DomainError(f"n_samples must be >= {minimum}, got {n_samples}")


def draw_terminations(
    medium: PiecewiseMedium,
    n_samples: int,
    seed: int,
    workers: int = 1,
    progress: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Termination distances (NaN on escape) and 1-based segment numbers (0 on escape) for n_samples rays.
    """
    _check_samples(n_samples)

    def draw(stream_and_size):
        stream, size = stream_and_size
        return sample_terminations(medium, stream_uniforms(seed, stream, size))

    blocks = list(
        _run_blocks(draw, block_layout(n_samples), workers, progress, "Sampling")
    )
    return (
        np.concatenate([t for t, _ in blocks]),
        np.concatenate([segment for _, segment in blocks]),
    )


def mc_estimate(
    medium: PiecewiseMedium,
    background: Optional[Vector] = None,
    n_samples: int = 100_000,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
) -> EstimateStats:
    """
    Average color over simulated rays: a hit contributes the color of its segment, an escape the background (black
    when absent).
    """
    _check_samples(n_samples, minimum=2)
    background = resolve_background(background)

    def block_moments(stream_and_size):
        stream, size = stream_and_size
        t, segment = sample_terminations(medium, stream_uniforms(seed, stream, size))
        hit = segment > 0
        colors = np.where(
            hit[:, None], medium.colors[np.maximum(segment - 1, 0)], background[None, :]
        )
        depths = np.where(hit, t, 0.0)[:, None]
        return _Moments.of(colors), _Moments.of(depths), int(np.sum(~hit))

    color_moments: Optional[_Moments] = None
    depth_moments: Optional[_Moments] = None
    escapes = 0
    for colors, depths, escaped in _run_blocks(
        block_moments, block_layout(n_samples), workers, progress, "Simulating"
    ):
        color_moments = colors if color_moments is None else color_moments.merge(colors)
        depth_moments = depths if depth_moments is None else depth_moments.merge(depths)
        escapes += escaped

    logger.info(
        f"Simulated {n_samples} rays (seed={seed}): escape fraction {escapes / n_samples:.6f}"
    )
    return EstimateStats(
        mean=color_moments.mean,
        standard_error=color_moments.standard_error,
        n_samples=n_samples,
        escape_fraction=escapes / n_samples,
        depth_mean=float(depth_moments.mean[0]),
        depth_standard_error=float(depth_moments.standard_error[0]),
    )


def mc_expected_depth(
    medium: PiecewiseMedium, n_samples: int = 100_000, seed: int = 0, workers: int = 1
) -> Tuple[float, float]:
    """
    Monte Carlo mean of t * 1{hit} and its standard error.
    """
    stats = mc_estimate(medium, None, n_samples, seed, workers)
    return stats.depth_mean, stats.depth_standard_error


def empirical_opacity(
    medium: PiecewiseMedium,
    n_samples: int,
    seed: int,
    t_grid,
    workers: int = 1,
) -> np.ndarray:
    """
    Fraction of simulated rays that terminated at or before each grid point.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64).reshape(-1)
    if t_grid.size == 0:
        raise DomainError("t_grid must not be empty")
    if np.any(np.diff(t_grid) < 0):
        raise DomainError("t_grid must be sorted")
    medium.check_domain(float(t_grid[0]), float(t_grid[-1]))

    t, segment = draw_terminations(medium, n_samples, seed, workers)
    hits = np.sort(t[segment > 0])
    return np.searchsorted(hits, t_grid, side="right") / n_samples


def ks_distance(medium: PiecewiseMedium, t: np.ndarray, segment: np.ndarray) -> float:
    """
    Kolmogorov-Smirnov sup distance between the empirical termination CDF (escapes at +inf) and the opacity.
    """
    n = t.shape[0]
    hits = np.sort(t[segment > 0])
    m = hits.shape[0]
    total = float(opacity_curve(medium, [medium.t_end])[0])
    if m == 0:
        return total
    cdf = opacity_curve(medium, hits)
    above = np.arange(1, m + 1) / n - cdf
    below = cdf - np.arange(0, m) / n
    return float(max(above.max(), below.max(), abs(total - m / n)))

