import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ftsa.basis import make_fourier_basis, make_grid

settings.register_profile(
    "default", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def grid():
    return make_grid(1001)


@pytest.fixture(scope="session")
def basis15(grid):
    return make_fourier_basis(15, grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
