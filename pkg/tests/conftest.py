"""Shared fixtures: small study datasets, a fast chain configuration, and
the acceptance-criterion verdict log printed after the run."""

import numpy as np
import pytest

from skewfit import ChainConfig, GsnParams, gsn_sample

_CRITERION_LINES = []


@pytest.fixture(scope="session")
def criterion_log():
    """Collector for one CRITERION verdict line per acceptance test."""
    return _CRITERION_LINES.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def moderate_data():
    """m=100 draws from the moderate-skew geometric generator."""
    return gsn_sample(GsnParams(1.0, 1.0, 0.8), 100, np.random.default_rng(11))


@pytest.fixture(scope="session")
def fast_config():
    """Chain settings small enough for unit tests."""
    return ChainConfig(iterations=800, burn_in=200, thin=2, seed=7)
