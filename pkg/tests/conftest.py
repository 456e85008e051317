import pytest

from qdeform import Statistics, interior, make_space


@pytest.fixture(scope="session")
def bose12():
    return make_space(2, Statistics.BOSE, 12)


@pytest.fixture(scope="session")
def bose12_interior(bose12):
    return interior(bose12, 2)


@pytest.fixture(scope="session")
def fermi2():
    return make_space(2, Statistics.FERMI, 2)
