"""
Monte Carlo check of a medium file: simulated ray terminations against the deterministic renderer.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from volren.medium.io import format_float, read_medium_csv
from volren.medium.ray import Vector
from volren.renderer import render_piecewise
from volren.stochastic.estimators import EstimateStats, mc_estimate
from volren.utils.log import get_project_logger

logger = get_project_logger(__name__)

# |z| above this fails validation
Z_THRESHOLD = 4.0


@dataclass(frozen=True)
class ValidationReport:
    stats: EstimateStats
    expected: np.ndarray
    z: np.ndarray

    @property
    def passed(self) -> bool:
        return bool(np.all(np.abs(self.z) <= Z_THRESHOLD))

    def to_csv(self) -> str:
        lines = ["channel,mean,stderr,expected,z"]
        for channel, name in enumerate("rgb"):
            values = (
                self.stats.mean[channel],
                self.stats.standard_error[channel],
                self.expected[channel],
                self.z[channel],
            )
            lines.append(",".join([name] + [format_float(v) for v in values]))
        lines.append(f"escape_fraction,{format_float(self.stats.escape_fraction)}")
        return "\n".join(lines) + "\n"


def validate_main(
    medium_path: str,
    n_samples: int,
    seed: int,
    expect: Optional[Vector] = None,
    background: Optional[Vector] = None,
    workers: int = 1,
    progress: bool = False,
) -> ValidationReport:
    medium = read_medium_csv(medium_path)
    stats = mc_estimate(medium, background, n_samples, seed, workers, progress)
    expected = (
        render_piecewise(medium, background).color
        if expect is None
        else np.asarray(expect, dtype=np.float64)
    )
    report = ValidationReport(stats=stats, expected=expected, z=stats.z_scores(expected))
    if not report.passed:
        logger.warning(f"Monte Carlo estimate disagrees with the expected color: z={report.z.tolist()}")
    return report
