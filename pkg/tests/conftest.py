import sys

import pytest

from tribekit.clan import poset_clan
from tribekit.models.fingpd import FinGpdModel
from tribekit.models.finset import FinSetModel
from tribekit.models.universe import UniverseSpec, generate_universe


@pytest.fixture(scope="session")
def universe():
    return generate_universe(UniverseSpec())


@pytest.fixture(scope="session")
def gpd(universe):
    return FinGpdModel(universe.objects)


@pytest.fixture(scope="session")
def G(gpd):
    """Universe objects by name."""
    return {X.name: X for X in gpd.objects}


@pytest.fixture(scope="session")
def micro(G):
    return [G[n] for n in ("0", "1", "I", "d2", "B(Z2)")]


@pytest.fixture(scope="session")
def finset3():
    return FinSetModel(3)


@pytest.fixture
def square():
    """The four-element lattice 0 <= a, b <= 1."""
    return poset_clan("1 a b 0".split(), [("a", "1"), ("b", "1"), ("0", "a"), ("0", "b")])


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.verdict_line(number))
