"""
Test configuration and fixtures.
"""
import numpy as np
import pytest

from src.config import SimConfig
from src.models.RandomUnitaryChannel import ExplicitChannel
from src.models.PauliString import PauliString
from src.models.Unitary import Unitary
from src.pool import close_pool, init_pool


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long statistical and stress runs (deselect with -m 'not slow')")


@pytest.fixture(autouse=True)
def inline_pool():
    """Every test starts and ends with tasks running inline."""
    init_pool(1)
    yield
    close_pool()


@pytest.fixture
def rng():
    """Fixed-seed generator."""
    return np.random.default_rng(20240611)


@pytest.fixture
def sim_config():
    """Default caps, one worker."""
    return SimConfig(
        dense_qubit_cap=20,
        stabilizer_qubit_cap=4096,
        enumeration_cap=4096,
        oracle_qubit_cap=6,
        dilation_term_cap=64,
        workers=1,
        log_level='WARNING'
    )


@pytest.fixture
def bit_flip_channel():
    """{0.5 I, 0.5 X} on one qubit."""
    return ExplicitChannel(
        [0.5, 0.5],
        [Unitary.from_pauli(PauliString.from_text('I')), Unitary.from_pauli(PauliString.from_text('X'))]
    )
