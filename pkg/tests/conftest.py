import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cliffwave.grid import GridSpec

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def ref_grid():
    """65^2 samples on [-8, 8]^2."""
    return GridSpec.centered(2, 65, 8.0)


@pytest.fixture(scope="session")
def small_grid():
    return GridSpec.centered(2, 33, 8.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_multivectors(rng, count, dim, complex_=True):
    out = rng.normal(size=(count, dim))
    if complex_:
        out = out + 1j * rng.normal(size=(count, dim))
    return out


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            if "info:" not in line:
                terminalreporter.write_line(line)
