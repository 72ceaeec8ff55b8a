import numpy as np
import pytest

from fockwitness import phi_partition, enumerate_basis, pattern_state, tensor, uniform_mixture


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


@pytest.fixture(scope="session")
def phi22():
    return phi_partition(4, 2)


@pytest.fixture(scope="session")
def product_1100_0011():
    return tensor(pattern_state("1100"), pattern_state("0011"))


@pytest.fixture(scope="session")
def white_noise_42():
    b = enumerate_basis(4, 2)
    return uniform_mixture(b, b)
