import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from flexpath.beam import BeamModel  # noqa: E402


@pytest.fixture
def unit_fem():
    """EI = rho = L = 1 rod, so omega_n = beta_n**2."""
    return BeamModel(E=1.0, I=1.0, rho=1.0, L=1.0, h=0.01, sigma_yield=1.0, n_nodes=41,
                     backend="fem")


@pytest.fixture
def unit_fd():
    return BeamModel(E=1.0, I=1.0, rho=1.0, L=1.0, h=0.01, sigma_yield=1.0, n_nodes=101,
                     backend="fd")


@pytest.fixture
def steel_strip():
    # 50 mm x 1 mm spring-steel strip, 0.5 m long
    return BeamModel(E=2.0e11, I=4.1667e-12, rho=0.3925, L=0.5, h=5.0e-4, sigma_yield=2.5e8,
                     n_nodes=21, backend="fem")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
