import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=30, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def odd_fixture():
    from nullgs.fixtures import random_fixture
    return random_fixture(7, 3, np.random.default_rng(7))


@pytest.fixture(scope="session")
def even_fixture():
    from nullgs.fixtures import random_fixture
    return random_fixture(6, 3, np.random.default_rng(6))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
