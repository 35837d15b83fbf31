import pytest

from ihomology.filtered import builtin


@pytest.fixture(scope="session")
def s4():
    return builtin("s4")


@pytest.fixture(scope="session")
def rp3():
    return builtin("rp3")


@pytest.fixture(scope="session")
def sigma_rp3():
    return builtin("sigma-rp3")
