import numpy as np
import pytest

from app.core.config import get_settings
from app.models.fd_config import FDConfig
from app.services.symmetric_space import make_factor, product
from app.services.virtual_immersion import omega0


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line(
        "markers",
        "slow: whole-catalog runs and nested finite differences"
    )


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached; every test starts from the current environment"""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fast_config():
    """Few samples; default seed, steps and tolerances"""
    return FDConfig(samples=5)


@pytest.fixture(scope="session")
def sphere2():
    return make_factor("sphere", 2)


@pytest.fixture(scope="session")
def hyperbolic_plane():
    return make_factor("hyperbolic2")


@pytest.fixture(scope="session")
def sl_so3():
    return make_factor("sl_so", 3)


@pytest.fixture(scope="session")
def flat_plane():
    return make_factor("euclidean", 2)


@pytest.fixture(scope="session")
def sphere_times_line():
    return product([make_factor("sphere", 2), make_factor("euclidean", 1)])


@pytest.fixture(scope="session")
def sphere_omega(sphere2):
    return omega0(sphere2)
