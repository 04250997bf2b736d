import sys

import pytest

from bipartite_sampler import BipartiteNetwork, DegreeSequencePair, enumerate_universe

# Three top nodes X, Y, Z over three bottom nodes; margins {1,2,1}/{1,2,1}.
NETWORK_B = [[1], [0, 1], [2]]
NETWORK_A = [[1], [1, 2], [0]]  # one Y-Z trade away from B
NETWORK_C = [[0], [1, 2], [1]]  # the only member at 6/9 from B


@pytest.fixture
def network_b():
    return BipartiteNetwork(3, 3, NETWORK_B)


@pytest.fixture
def network_a():
    return BipartiteNetwork(3, 3, NETWORK_A)


@pytest.fixture
def network_c():
    return BipartiteNetwork(3, 3, NETWORK_C)


@pytest.fixture(scope="session")
def toy_pair():
    return DegreeSequencePair([1, 1, 2], [1, 1, 2])


@pytest.fixture(scope="session")
def toy_universe(toy_pair):
    return enumerate_universe(toy_pair)


@pytest.fixture(scope="session")
def xyz_universe():
    return enumerate_universe(DegreeSequencePair([1, 2, 1], [1, 2, 1]))


def pytest_terminal_summary(terminalreporter):
    results = [r for name, mod in list(sys.modules.items())
               if name.endswith("test_acceptance") for r in getattr(mod, "RESULTS", [])]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in results:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
