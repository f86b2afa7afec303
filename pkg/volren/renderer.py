"""
Expected color of a ray through emission-absorption media.

Weights are w_n = T_n * alpha_n with T_n taken from accumulated optical depth (sum, then a single exp) and
alpha_n = 1 - exp(-sigma_n * delta_n) evaluated through expm1. The background, when given, is composited with the
residual transmittance T(t_{N+1}).
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from volren.errors import DomainError
from volren.medium.fields import as_color
from volren.medium.piecewise import PiecewiseMedium, restrict
from volren.medium.ray import Vector
from volren.transmittance import attenuate, transmittance, transmittance_profile

# below this optical thickness 1 - exp(-x) == x to double precision
LINEAR_ALPHA_THRESHOLD = 1e-12


@dataclass(frozen=True)
class RenderOutput:
    color: np.ndarray
    weights: np.ndarray
    residual_transmittance: float
    alphas: np.ndarray
    expected_depth: Optional[float] = None

    @property
    def accumulation(self) -> float:
        return 1.0 - self.residual_transmittance


@dataclass(frozen=True)
class RenderGradients:
    """
    Partials of the rendered color: d_sigma[n, channel] = dC_channel / dsigma_n and d_color[n] = dC / dc_n, the
    latter being the same for every channel.
    """

    d_sigma: np.ndarray
    d_color: np.ndarray


def compute_alphas(sigmas, deltas) -> np.ndarray:
    """
    alpha_n = 1 - exp(-sigma_n * delta_n).
    """
    x = np.asarray(sigmas, dtype=np.float64) * np.asarray(deltas, dtype=np.float64)
    return np.where(x < LINEAR_ALPHA_THRESHOLD, x, -np.expm1(-x))


def resolve_background(background: Optional[Vector]) -> np.ndarray:
    if background is None:
        return np.zeros(3)
    return as_color(background, "background")


def _truncated_exponential_mean(x: np.ndarray) -> np.ndarray:
    # mean position, as a fraction of the segment, of an exponential hit truncated to the segment
    x = np.asarray(x, dtype=np.float64)
    small = x < 1e-6
    safe = np.where(small, 1.0, x)
    with np.errstate(over="ignore"):
        exact = 1.0 / safe - 1.0 / np.expm1(safe)
    return np.where(small, 0.5 - x / 12.0, exact)


def render_homogeneous(
    sigma: float, color: Vector, a: float, b: float
) -> np.ndarray:
    """
    C(a -> b) = c * (1 - exp(-sigma * (b - a))) for constant density and color.
    """
    if not (np.isfinite(sigma) and sigma >= 0):
        raise DomainError(f"density must be finite and >= 0, got {sigma!r}")
    if not a < b:
        raise DomainError(f"interval start {a!r} must be smaller than its end {b!r}")
    return as_color(color) * float(compute_alphas(sigma, b - a))


def render_piecewise(
    medium: PiecewiseMedium, background: Optional[Vector] = None
) -> RenderOutput:
    transmittances = transmittance_profile(medium)
    alphas = compute_alphas(medium.sigmas, medium.deltas)
    weights = transmittances[:-1] * alphas
    residual = float(transmittances[-1])

    color = weights @ medium.colors + residual * resolve_background(background)
    hit_positions = medium.boundaries[:-1] + medium.deltas * _truncated_exponential_mean(
        medium.sigmas * medium.deltas
    )
    return RenderOutput(
        color=color,
        weights=weights,
        residual_transmittance=residual,
        alphas=alphas,
        expected_depth=float(weights @ hit_positions),
    )


def render_alpha(
    alphas: Sequence[float],
    colors,
    background: Optional[Vector] = None,
) -> RenderOutput:
    """
    Alpha-compositing form: C = sum_n T_n alpha_n c_n with T_n = prod_{k<n} (1 - alpha_k).

    The product is accumulated as a sum of -log(1 - alpha_k); alpha = 1 (an opaque segment) is accepted and makes
    every later weight and the residual exactly 0.
    """
    alphas = np.array(alphas, dtype=np.float64).reshape(-1)
    colors = np.array(colors, dtype=np.float64).reshape(-1, 3)
    if alphas.shape[0] != colors.shape[0]:
        raise DomainError(
            f"got {alphas.shape[0]} alphas but {colors.shape[0]} colors"
        )
    if not np.all(np.isfinite(alphas)) or np.any((alphas < 0) | (alphas > 1)):
        raise DomainError(f"alphas must lie in [0, 1], got {alphas.tolist()}")
    if np.any((colors < 0) | (colors > 1)) or not np.all(np.isfinite(colors)):
        raise DomainError("colors must lie in [0, 1]")

    with np.errstate(divide="ignore"):
        depths = -np.log1p(-alphas)
    profile = np.concatenate([[0.0], np.cumsum(depths)])
    transmittances = attenuate(profile)
    weights = transmittances[:-1] * alphas
    residual = float(transmittances[-1])
    color = weights @ colors + residual * resolve_background(background)
    return RenderOutput(
        color=color,
        weights=weights,
        residual_transmittance=residual,
        alphas=alphas,
    )


def render_telescoping(
    medium: PiecewiseMedium, background: Optional[Vector] = None
) -> np.ndarray:
    """
    sum_n c_n * (T(t_n) - T(t_{n+1})) + T(D) * c_bg, with every T(t) evaluated on its own from t_1.
    """
    origin = medium.t_start
    boundary_transmittance = [transmittance(medium, origin, t) for t in medium.boundaries]
    color = np.zeros(3)
    for n in range(medium.n_segments):
        color += medium.colors[n] * (
            boundary_transmittance[n] - boundary_transmittance[n + 1]
        )
    return color + boundary_transmittance[-1] * resolve_background(background)


def weights(medium: PiecewiseMedium) -> Tuple[np.ndarray, float]:
    output = render_piecewise(medium)
    return output.weights, output.residual_transmittance


def render_interval(
    medium: PiecewiseMedium, a: float, b: float, background: Optional[Vector] = None
) -> RenderOutput:
    """
    Expected color emitted over [a, b] alone, as seen from a (no attenuation from [t_1, a]).
    """
    return render_piecewise(restrict(medium, a, b), background)


def grad_render(
    medium: PiecewiseMedium, background: Optional[Vector] = None
) -> RenderGradients:
    """
    Closed-form partials of render_piecewise's color. Boundaries are held fixed.

    dC/dc_n = w_n and dC/dsigma_n = delta_n * [T_n (1 - alpha_n) c_n - sum_{m>n} w_m c_m - T(D) c_bg].
    """
    output = render_piecewise(medium)
    transmittances = transmittance_profile(medium)[:-1]
    weighted = output.weights[:, None] * medium.colors
    # later[n] = sum_{m > n} w_m c_m
    suffix = np.cumsum(weighted[::-1], axis=0)[::-1]
    later = np.concatenate([suffix[1:], np.zeros((1, 3))], axis=0)
    survivors = (transmittances * (1.0 - output.alphas))[:, None] * medium.colors
    tail = output.residual_transmittance * resolve_background(background)
    d_sigma = medium.deltas[:, None] * (survivors - later - tail[None, :])
    return RenderGradients(d_sigma=d_sigma, d_color=output.weights.copy())
