import numpy as np
import pytest

from stirsap import PulseConfig, SystemConfig


@pytest.fixture(scope="session")
def system() -> SystemConfig:
    """Reference system: detuning 2*pi*2.5 GHz, Rabi 2*pi*5 MHz."""
    return SystemConfig.default()


@pytest.fixture(scope="session")
def pulse(system) -> PulseConfig:
    """Reference pulse pair: T = 4 pi-times (0.4 ms), default shape ratios."""
    return PulseConfig.from_total_time(4.0 * system.pi_time, system.reference_rabi)


@pytest.fixture(scope="session")
def scaled_system() -> SystemConfig:
    """Dimensionless detuning-to-Rabi ratio 500 configuration."""
    return SystemConfig(detuning=500.0, reference_rabi=1.0)


@pytest.fixture(scope="session")
def ground() -> np.ndarray:
    return np.array([1.0, 0.0], dtype=complex)
