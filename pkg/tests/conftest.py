import numpy as np
import pytest

from ofdm_sensing.channel import Target
from ofdm_sensing.waveform import OfdmConfig

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def cfg():
    """24 GHz, N=1024, T=11 us, Q=128, single symbol."""
    return OfdmConfig()


@pytest.fixture
def cfg256():
    return OfdmConfig(n_symbols=256)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def target_at_delay(k_r: int, config: OfdmConfig, v: float = 0.0, alpha=1.0) -> Target:
    """Target whose rounded delay is exactly ``k_r`` samples."""
    return Target(k_r * config.range_per_sample, v, alpha)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
