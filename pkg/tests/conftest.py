import numpy as np
import pytest

import strainkp as sk


@pytest.fixture(scope="session")
def table():
    return sk.default_parameter_table()


@pytest.fixture(scope="session")
def gaas(table):
    return table["GaAs"]


@pytest.fixture(scope="session")
def alas(table):
    return table["AlAs"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def random_strain(rng):
    """Factory for random small strain states (shears included)."""

    def make(scale=0.01, shear=True):
        v = rng.uniform(-scale, scale, size=6)
        if not shear:
            v[3:] = 0.0
        return sk.StrainState(*v)

    return make
