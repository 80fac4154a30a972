import numpy as np
import pytest

from stagflow.operators import Dimension, PeriodicGrid

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def grid64():
    return PeriodicGrid(64)


@pytest.fixture
def grid256():
    return PeriodicGrid(256)


@pytest.fixture
def dim3():
    return Dimension(3)


def bandlimited(grid, rng, modes=8, decay=1.0):
    """Random real mean-zero trigonometric polynomial sampled on ``grid``."""
    k = np.arange(1, modes + 1)
    c = (rng.standard_normal(modes) + 1j * rng.standard_normal(modes)) / k**decay
    return np.real(np.exp(2j * np.pi * np.outer(grid.x, k)) @ c)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
