import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from peelkit.geometry import from_vertices
from peelkit.peeling import PeelParams, peel

settings.register_profile("default", deadline=None,
                          max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", 40)),
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def square3():
    return from_vertices([[0, 0], [3, 0], [3, 3], [0, 3]])


@pytest.fixture(scope="session")
def square3_dec(square3):
    return peel(square3, PeelParams(rho=1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance")
    for n in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[n])
