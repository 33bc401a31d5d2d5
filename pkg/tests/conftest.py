import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nlwave.spectral import Field, irspec, make_grid

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def bandlimited(grid, rng, band=8, mean=True):
    """Random real field with modes ``|k| <= band``."""
    c = np.zeros(grid.N // 2 + 1, dtype=complex)
    k = np.arange(1, band + 1)
    c[1 : band + 1] = (rng.normal(size=band) + 1j * rng.normal(size=band)) / (1 + k) ** 1.5
    if mean:
        c[0] = rng.normal()
    return Field(grid, irspec(c, grid))


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture
def grid_pi():
    return make_grid(math.pi, 64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
