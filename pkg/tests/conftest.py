import numpy as np
import pytest

from symkl import PopulationModel


def random_simplex(rng: np.random.Generator, r: int, min_entry: float = 1e-3) -> np.ndarray:
    """Random strictly positive simplex point.

    Normalized exponential draws, rejecting vectors whose smallest entry
    falls below ``min_entry`` so downstream logs and ratios stay tame.
    """
    while True:
        raw = rng.exponential(size=r)
        vec = raw / raw.sum()
        if vec.min() >= min_entry:
            return vec


def random_model(rng: np.random.Generator, r: int) -> PopulationModel:
    """Random population with conditionals kept away from the null."""
    while True:
        p = random_simplex(rng, r)
        q = random_simplex(rng, r)
        if np.max(np.abs(p - q)) > 1e-6:
            return PopulationModel(
                label_prob=float(rng.uniform(0.2, 0.8)), cond_p=p, cond_q=q
            )


@pytest.fixture
def test_model() -> PopulationModel:
    """The worked example used throughout: a 2-symbol population."""
    return PopulationModel(label_prob=0.5, cond_p=(0.5, 0.5), cond_q=(0.25, 0.75))
