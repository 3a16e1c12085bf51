import numpy as np
import pytest

from tfrlab import FiniteSignal, gaussian

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def g0_144():
    return gaussian().sample(144)


def random_signal(L, rng, step=None):
    return FiniteSignal.random(L, rng, step)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
