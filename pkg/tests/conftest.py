import numpy as np
import pytest

from squidsim.ladder import LadderParams, compare_effective_vs_full
from squidsim.scenarios import run_entanglement_transfer, run_pair_generation


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: long-running comparison runs, excluded by default"
    )


@pytest.fixture(scope="session")
def pair_run():
    """One pair-generation run with committed defaults, shared per session."""
    return run_pair_generation()


@pytest.fixture(scope="session")
def transfer_run():
    """One entanglement-transfer run with committed defaults."""
    return run_entanglement_transfer()


@pytest.fixture(scope="session")
def ladder_comparison():
    """Cascade-vs-effective comparison at g/Delta = 1e-2."""
    return compare_effective_vs_full(LadderParams.from_gaps(0.01, 9.0, 11.0))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
