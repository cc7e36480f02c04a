import numpy as np
import pytest

from empcirc import CmtParams

F_CENTER = 543.8e6


@pytest.fixture
def low_power_params():
    # Rates (over 2*pi): g = 4.9 MHz, kappa0 = 0.9 MHz, kappa_m = 1.3 MHz.
    return CmtParams.from_hz(F_CENTER, 0.9e6, F_CENTER, 1.3e6, 4.9e6)


@pytest.fixture
def high_power_params():
    # Rates at the deepest-dip operating point: g = 6.1, kappa0 = 2.0,
    # kappa_m = 2.7 MHz.
    return CmtParams.from_hz(F_CENTER, 2.0e6, F_CENTER, 2.7e6, 6.1e6)


@pytest.fixture
def uniform_params():
    return CmtParams.from_hz(500e6, 1e6, 500e6, 1e6, 2e6, path_ratio=1.0)


def random_params(rng):
    """Valid parameters with log-uniform rates in [0.1, 10] MHz and detunings
    within +/-20 MHz of a 543.8 MHz center."""
    rates = 10.0 ** rng.uniform(-1, 1, size=3) * 1e6
    f0 = F_CENTER + rng.uniform(-20e6, 20e6)
    fm = F_CENTER + rng.uniform(-20e6, 20e6)
    return CmtParams.from_hz(f0, rates[0], fm, rates[1], rates[2],
                             path_ratio=rng.uniform(0.5, 4.0))
