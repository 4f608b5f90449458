import cmath
import math

import numpy as np
import pytest
from hypothesis import strategies as st

from pairguess.qubit import make_state

ACCEPTANCE_LINES = []


def random_state(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return make_state(v[0], v[1])


@st.composite
def qubit_states(draw):
    theta = draw(st.floats(0.0, math.pi))
    phi = draw(st.floats(0.0, 2 * math.pi))
    gamma = draw(st.floats(0.0, 2 * math.pi))
    g = cmath.exp(1j * gamma)
    return make_state(g * math.cos(theta / 2), g * cmath.exp(1j * phi) * math.sin(theta / 2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
