import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


def random_stochastic(rng, k, floor=0.0):
    """A random row-stochastic (k, k) matrix; floor > 0 keeps it irreducible."""
    m = rng.random((k, k)) + floor
    return m / m.sum(axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
