import numpy as np
import pytest

from measproc import catalog


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture(scope="session")
def cnot():
    return catalog.cnot_model()


@pytest.fixture(scope="session")
def nonproj():
    return catalog.non_projective_model(catalog.HADAMARD)


@pytest.fixture(scope="session")
def shift3():
    return catalog.shift_model(3)


@pytest.fixture(scope="session")
def models():
    return catalog.catalog_models()


PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
ZERO = np.array([1, 0], dtype=complex)
ONE = np.array([0, 1], dtype=complex)
