import warnings

import numpy as np
import pytest

from fluidnav import FlowField, Singularity


@pytest.fixture(autouse=True)
def _quiet_overlap_warnings():
    # Overlapping-disk and inside-disk warnings are part of the contract and
    # tested explicitly; keep them from cluttering every other test.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield


def random_field(rng: np.random.RandomState, n_sing: int) -> FlowField:
    theta = float(rng.uniform(-np.pi, np.pi))
    sings = []
    for _ in range(n_sing):
        center = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
        radius = float(rng.uniform(0.2, 0.6))
        sings.append(Singularity(center, radius))
    return FlowField(theta=theta, beta=1, singularities=tuple(sings))


def sample_exterior(rng: np.random.RandomState, field: FlowField, n: int,
                    margin: float = 0.05) -> list[complex]:
    points = []
    while len(points) < n:
        z = complex(rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0))
        if all(abs(z - s.center) > s.radius + margin for s in field.singularities):
            points.append(z)
    return points
