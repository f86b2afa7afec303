import math
from pathlib import Path

import numpy as np
import pytest

from volren.medium import make_piecewise

LN2 = math.log(2.0)

DEMO_MEDIUM = Path(__file__).parent.parent / "configurations" / "media" / "two_segments.csv"


def random_medium(rng: np.random.Generator, max_segments: int = 16, vacuum_fraction: float = 0.15):
    """
    Random medium with up to max_segments segments, random start, and some vacuum segments.
    """
    n = int(rng.integers(1, max_segments + 1))
    deltas = rng.uniform(0.05, 1.5, n)
    start = rng.uniform(0.0, 2.0)
    boundaries = start + np.concatenate([[0.0], np.cumsum(deltas)])
    sigmas = rng.uniform(0.0, 3.0, n)
    sigmas[rng.random(n) < vacuum_fraction] = 0.0
    return make_piecewise(boundaries, sigmas, rng.random((n, 3)))


@pytest.fixture
def two_segments():
    return make_piecewise([0.0, 1.0, 2.0], [LN2, LN2], [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


@pytest.fixture
def medium_factory():
    return random_medium


@pytest.fixture
def demo_medium_path() -> str:
    return str(DEMO_MEDIUM)
