import pytest

from rauzygeom.algebra import pisot_split
from rauzygeom.projections import projections
from rauzygeom.substitution import hokkaido_family, tribonacci


@pytest.fixture(scope="session")
def sigma0():
    return hokkaido_family(0)


@pytest.fixture(scope="session")
def sigma1():
    return hokkaido_family(1)


@pytest.fixture(scope="session")
def sigma2():
    return hokkaido_family(2)


@pytest.fixture(scope="session")
def tribo():
    return tribonacci()


@pytest.fixture(scope="session")
def pd0(sigma0):
    return pisot_split(sigma0)


@pytest.fixture(scope="session")
def proj0(sigma0, pd0):
    return projections(sigma0, pd0)


@pytest.fixture(scope="session")
def proj1(sigma1):
    return projections(sigma1, pisot_split(sigma1))


@pytest.fixture(scope="session")
def proj2(sigma2):
    return projections(sigma2, pisot_split(sigma2))


@pytest.fixture(scope="session")
def scc0(sigma0, proj0):
    from rauzygeom.dynamics import strong_coincidence

    return strong_coincidence(sigma0, proj0, depth_cap=20)
