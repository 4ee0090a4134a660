import pytest

from dirac_ladder import CODATA_ALPHA, CoulombSystem, QuantumState

#: the three nuclear charges used by grid-style tests
GRID_Z = (1, 20, 80)


@pytest.fixture(scope="session")
def sys_half():
    """Strong-coupling system g = 0.5 with closed-form desk values."""
    return CoulombSystem.from_coupling(0.5)


@pytest.fixture(scope="session")
def hydrogen():
    return CoulombSystem(Z=1, alpha=CODATA_ALPHA, mass=1.0)


@pytest.fixture(scope="session")
def s1s():
    return QuantumState(1, 1, -1)


@pytest.fixture(scope="session")
def s2s():
    return QuantumState(2, 1, -1)


@pytest.fixture(scope="session")
def s2p32():
    return QuantumState(2, 3, -1)


def all_states(max_n):
    out = []
    for n in range(1, max_n + 1):
        for two_j in range(1, 2 * n, 2):
            for eps in (-1, 1):
                if n == (two_j + 1) // 2 and eps == 1:
                    continue
                out.append(QuantumState(n=n, two_j=two_j, eps=eps))
    return out
