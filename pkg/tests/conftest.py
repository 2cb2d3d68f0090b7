import pytest

from liaisonlab.algebra_core import PrimeField, RingSpec


@pytest.fixture(scope="session")
def field():
    return PrimeField(10007)


@pytest.fixture(scope="session")
def ring(field):
    return RingSpec.p1xp2(field)


@pytest.fixture(scope="session")
def plane(field):
    return RingSpec.plane(field)
