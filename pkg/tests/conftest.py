import pytest
from hypothesis import HealthCheck, settings

from cubic_orchard.cubic_surface import load_surface

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def F1():
    return load_surface("F1")


@pytest.fixture(scope="session")
def F2():
    return load_surface("F2")


@pytest.fixture(scope="session")
def F3():
    return load_surface("F3")


@pytest.fixture(scope="session")
def F4():
    return load_surface("F4")


@pytest.fixture(scope="session")
def F5():
    return load_surface("F5")
