import math

import pytest

from rovib.params import PhysicalParams
from rovib.sweeps import tune_couplings
from rovib.system import build_system

TWO_PI = 2 * math.pi

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def defaults():
    return PhysicalParams()


@pytest.fixture(scope="session")
def balanced(defaults):
    return tune_couplings(defaults).apply(defaults)


@pytest.fixture(scope="session")
def coupled(defaults):
    return build_system(defaults)


@pytest.fixture(scope="session")
def decoupled(defaults):
    return build_system(defaults.replace(input_power=0.0))
