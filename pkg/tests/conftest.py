import numpy as np
import pytest

from gaborapprox import GaborSystem, WindowSpec, canonical_dual


@pytest.fixture(scope="session")
def small_system():
    return canonical_dual(GaborSystem.from_window(WindowSpec("gaussian"), 32, 4, 4))


@pytest.fixture(scope="session")
def system128():
    return canonical_dual(GaborSystem.from_window(WindowSpec("gaussian"), 128, 8, 8))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_signal(rng, L):
    return rng.standard_normal(L) + 1j * rng.standard_normal(L)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
