import numpy as np
import pytest

from specmimo.materials import Wavenumbers

F = 57.5e9


@pytest.fixture(scope="session")
def wn():
    return Wavenumbers.from_frequency(F)


@pytest.fixture(scope="session")
def lam(wn):
    return wn.wavelength


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
