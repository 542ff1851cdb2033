import pytest

from cubeshape.arith import build_mobius_sieve, build_squarefree_sieve


@pytest.fixture(scope="session")
def sf_sieve():
    return build_squarefree_sieve(10 ** 6)


@pytest.fixture(scope="session")
def mobius():
    return build_mobius_sieve(10 ** 5)
