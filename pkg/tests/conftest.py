import numpy as np
import pytest

from betaplane import atlas


@pytest.fixture(scope="session")
def beta_star():
    """Transition value at the default resolution; shared across the session."""
    return atlas.find_beta_star(tol=1e-5, resolution=256)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
