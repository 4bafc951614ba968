import pytest

from hypfrob import ensemble as ens


@pytest.fixture(scope="session")
def data_g1():
    return ens.compute_ensemble_data(3, 1, 6)


@pytest.fixture(scope="session")
def data_g2():
    return ens.compute_ensemble_data(3, 2, 8)


@pytest.fixture(scope="session")
def data_q5g1():
    return ens.compute_ensemble_data(5, 1, 6)
