import pytest
from hypothesis import HealthCheck, settings

from relmorse.molecules import get_molecule
from relmorse.units import OscillatorParams

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def h2():
    return get_molecule("H2")


@pytest.fixture(scope="session")
def h2_params(h2):
    return h2.params()


@pytest.fixture(scope="session")
def electron():
    return get_molecule("electron-uv")


@pytest.fixture
def natural():
    """hbar = m = omega = 1, gamma = 1 (one bound Morse level)."""
    return OscillatorParams(mass=1.0, hbar_omega=1.0, gamma=1.0, r_e=1.0, hbar_c=1.0)
