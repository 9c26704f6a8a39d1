import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from gridhom.gridcore import GridDiagram, load_grid
from gridhom.signs import build_sign_assignment

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def unknot2():
    return GridDiagram(2, (1, 0), (0, 1))


@pytest.fixture(scope="session")
def unknot3():
    return GridDiagram(3, (1, 2, 0), (0, 1, 2))


@pytest.fixture(scope="session")
def grid4():
    return GridDiagram(4, (1, 2, 3, 0), (0, 1, 2, 3))


@pytest.fixture(scope="session")
def hopf4():
    return load_grid(fixture_path("hopf4.grid"))


@pytest.fixture(scope="session")
def trefoil5():
    return load_grid(fixture_path("trefoil5.grid"))


@pytest.fixture(scope="session")
def t25():
    return load_grid(fixture_path("t25.grid"))


@pytest.fixture(scope="session")
def signs2(unknot2):
    return build_sign_assignment(unknot2)


@pytest.fixture(scope="session")
def signs3(unknot3):
    return build_sign_assignment(unknot3)


@pytest.fixture(scope="session")
def signs4(grid4):
    return build_sign_assignment(grid4)


@pytest.fixture(scope="session")
def signs_hopf(hopf4):
    return build_sign_assignment(hopf4)


@pytest.fixture(scope="session")
def signs5(trefoil5):
    return build_sign_assignment(trefoil5)


@pytest.fixture(scope="session")
def signs7(t25):
    return build_sign_assignment(t25)
