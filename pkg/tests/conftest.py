import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from charcensus import build_field

# numba compilation on first kernel use blows any per-example deadline
settings.register_profile(
    "charcensus",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("charcensus")


def make_rng(seed=0):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed)))


@pytest.fixture(scope="session")
def f3():
    return build_field(3)


@pytest.fixture(scope="session")
def f5():
    return build_field(5)


@pytest.fixture(scope="session")
def f7():
    return build_field(7)


@pytest.fixture(scope="session")
def f9():
    return build_field(3, 2)


@pytest.fixture(scope="session")
def f25():
    return build_field(5, 2)
