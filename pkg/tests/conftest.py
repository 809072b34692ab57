import numpy as np
import pytest

from markovpert import PrecisionMode, validate_stochastic
from reference_data import KEMENY_P

import acceptance_log


@pytest.fixture(scope="session")
def kemeny():
    return validate_stochastic(KEMENY_P, PrecisionMode.DOUBLE)


@pytest.fixture(scope="session")
def kemeny_single():
    return validate_stochastic(KEMENY_P, PrecisionMode.SINGLE)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
