from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from volren.errors import DomainError, MediumError
from volren.medium.fields import Field
from volren.medium.ray import Ray

UNIFORM = "uniform"
STRATIFIED = "stratified"


@dataclass(frozen=True)
class Placement:
    """
    Where a segment is point-sampled: its midpoint (uniform) or a seeded uniform draw inside it (stratified).
    """

    kind: str = UNIFORM
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in (UNIFORM, STRATIFIED):
            raise DomainError(
                f"placement must be '{UNIFORM}' or '{STRATIFIED}', got '{self.kind}'"
            )
        if self.kind == STRATIFIED and self.seed is None:
            raise DomainError("stratified placement needs a seed")

    @classmethod
    def uniform(cls) -> "Placement":
        return cls(UNIFORM)

    @classmethod
    def stratified(cls, seed: int) -> "Placement":
        return cls(STRATIFIED, int(seed))

    def offsets(self, n_segments: int, stream: int = 0) -> np.ndarray:
        """
        Fractional position of the sample inside each segment, in [0, 1).
        """
        if self.kind == UNIFORM:
            return np.full(n_segments, 0.5)
        from volren.stochastic.rng import philox_generator

        return philox_generator(self.seed, stream).random(n_segments)


@dataclass(frozen=True)
class PiecewiseMedium:
    """
    Ordered segments [t_n, t_{n+1}] with constant density sigma_n and color c_n.

    Build it with make_piecewise, which validates the inputs. Arrays are read-only.
    """

    boundaries: np.ndarray
    sigmas: np.ndarray
    colors: np.ndarray
    deltas: np.ndarray

    @property
    def n_segments(self) -> int:
        return int(self.sigmas.shape[0])

    @property
    def t_start(self) -> float:
        return float(self.boundaries[0])

    @property
    def t_end(self) -> float:
        return float(self.boundaries[-1])

    def __len__(self) -> int:
        return self.n_segments

    def segment_of(self, t: float) -> int:
        """
        1-based number of the segment containing t, right-continuous; t_{N+1} belongs to the last segment.
        """
        self.check_domain(t)
        index = int(np.searchsorted(self.boundaries, t, side="right"))
        return min(max(index, 1), self.n_segments)

    def check_domain(self, *ts: float):
        for t in ts:
            if not (np.isfinite(t) and self.t_start <= t <= self.t_end):
                raise DomainError(
                    f"t={t!r} is outside the medium [{self.t_start!r}, {self.t_end!r}]"
                )

    def with_sigmas(self, sigmas: Sequence[float]) -> "PiecewiseMedium":
        return make_piecewise(self.boundaries, sigmas, self.colors)

    def with_colors(self, colors) -> "PiecewiseMedium":
        return make_piecewise(self.boundaries, self.sigmas, colors)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def make_piecewise(
    boundaries: Sequence[float],
    sigmas: Sequence[float],
    colors: Union[Sequence[Sequence[float]], np.ndarray],
) -> PiecewiseMedium:
    """
    Validate and build a piecewise-constant medium. Indices in error messages are 1-based segment numbers (n) or
    boundary numbers.
    """
    boundaries = np.array(boundaries, dtype=np.float64).reshape(-1)
    sigmas = np.array(sigmas, dtype=np.float64).reshape(-1)
    colors = np.array(colors, dtype=np.float64)

    if boundaries.shape[0] < 2:
        raise MediumError(
            f"a medium needs at least two boundaries, got {boundaries.shape[0]}"
        )
    n = boundaries.shape[0] - 1
    if sigmas.shape[0] != n:
        raise MediumError(
            f"length mismatch: {boundaries.shape[0]} boundaries need {n} densities, got {sigmas.shape[0]}"
        )
    if colors.ndim != 2 or colors.shape != (n, 3):
        raise MediumError(
            f"length mismatch: {n} segments need {n} RGB colors, got shape {colors.shape}"
        )

    if not np.all(np.isfinite(boundaries)):
        i = int(np.argmin(np.isfinite(boundaries))) + 1
        # boundary i closes segment i - 1, the first one opens segment 1
        raise MediumError(f"non-finite boundary at index {i}", index=max(i - 1, 1))
    deltas = np.diff(boundaries)
    with np.errstate(invalid="ignore"):
        offending = (
            ~(deltas > 0)
            | ~np.isfinite(sigmas)
            | (sigmas < 0)
            | ~np.all((colors >= 0) & (colors <= 1), axis=1)
        )
    if np.any(offending):
        k = int(np.argmax(offending))
        _raise_segment_error(k + 1, sigmas[k], deltas[k], colors[k])

    return PiecewiseMedium(
        boundaries=_frozen(boundaries),
        sigmas=_frozen(sigmas),
        colors=_frozen(colors.copy()),
        deltas=_frozen(deltas),
    )


def _raise_segment_error(k: int, sigma: float, delta: float, color: np.ndarray):
    if delta == 0:
        raise MediumError(f"zero-length segment at n={k}", index=k)
    if delta < 0:
        raise MediumError(f"non-increasing boundaries at n={k}", index=k)
    if np.isnan(sigma):
        raise MediumError(f"NaN density at n={k}", index=k)
    if not np.isfinite(sigma):
        raise MediumError(f"non-finite density at n={k}", index=k)
    if sigma < 0:
        raise MediumError(f"negative density at n={k}", index=k)
    if np.any(np.isnan(color)):
        raise MediumError(f"NaN color at n={k}", index=k)
    if np.any(color < 0) or np.any(color > 1):
        raise MediumError(f"color outside [0, 1] at n={k}: {color.tolist()}", index=k)
    raise MediumError(f"invalid segment at n={k}", index=k)


def segment_boundaries(ray: Ray, n_segments: int) -> np.ndarray:
    boundaries = ray.t_near + (ray.t_far - ray.t_near) * (
        np.arange(n_segments + 1, dtype=np.float64) / n_segments
    )
    # pin the far end exactly, the affine map can be off by an ulp
    boundaries[0], boundaries[-1] = ray.t_near, ray.t_far
    return boundaries


def discretize(
    field: Field,
    ray: Ray,
    n_segments: int,
    placement: Optional[Placement] = None,
    stream: int = 0,
) -> PiecewiseMedium:
    """
    Partition [t_near, t_far] into n_segments equal segments and point-sample the field once per segment.

    Stratified placement draws its in-segment offsets from the (seed, stream) Philox stream, so the same seed and
    stream always produce the same medium.
    """
    if n_segments < 1:
        raise DomainError(f"n_segments must be >= 1, got {n_segments}")
    placement = placement or Placement.uniform()

    boundaries = segment_boundaries(ray, n_segments)
    deltas = np.diff(boundaries)
    ts = boundaries[:-1] + placement.offsets(n_segments, stream) * deltas
    sigmas, colors = field.evaluate_checked(ray.points(ts))
    return make_piecewise(boundaries, sigmas, colors)


def subdivide(medium: PiecewiseMedium, k: int) -> PiecewiseMedium:
    """
    Split every segment into k equal sub-segments carrying the same (sigma, color).
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    fractions = np.arange(k, dtype=np.float64) / k
    starts = medium.boundaries[:-1, None] + fractions[None, :] * medium.deltas[:, None]
    boundaries = np.append(starts.reshape(-1), medium.t_end)
    return make_piecewise(
        boundaries,
        np.repeat(medium.sigmas, k),
        np.repeat(medium.colors, k, axis=0),
    )


def restrict(medium: PiecewiseMedium, a: float, b: float) -> PiecewiseMedium:
    """
    The part of the medium lying in [a, b], with segments clipped at both ends.
    """
    medium.check_domain(a, b)
    if not a < b:
        raise DomainError(f"interval start {a!r} must be smaller than its end {b!r}")
    starts, ends = medium.boundaries[:-1], medium.boundaries[1:]
    keep = (ends > a) & (starts < b)
    inner = medium.boundaries[1:-1]
    inner = inner[(inner > a) & (inner < b)]
    boundaries = np.concatenate([[a], inner, [b]])
    return make_piecewise(boundaries, medium.sigmas[keep], medium.colors[keep])
