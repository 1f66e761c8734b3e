import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from finsler_lab.bodies import PBall, PolytopeH, PolytopeV, Translate

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def cube(n=2, half=1.0):
    return PolytopeH(np.vstack([np.eye(n), -np.eye(n)]), half * np.ones(2 * n))


@pytest.fixture
def disk():
    return PBall(2.0, 2)


@pytest.fixture
def square():
    return cube(2)


@pytest.fixture
def triangle():
    return PolytopeV([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


@pytest.fixture
def funk_ball():
    # Funk unit ball of the disk at x = (0.5, 0): disk - x
    return Translate(PBall(2.0, 2), [-0.5, 0.0])


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
