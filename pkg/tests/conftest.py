import math

import pytest

from curvecount.hyperbolic import torus_structure
from curvecount.surfaces import model_by_name


@pytest.fixture(scope="session")
def torus():
    return model_by_name("torus-1-1")


@pytest.fixture(scope="session")
def genus2():
    return model_by_name("genus-2")


@pytest.fixture(scope="session")
def modular_torus():
    """The (3,3,3) cusped structure."""
    return torus_structure(3, 3, 3)


@pytest.fixture(scope="session")
def second_torus_structure():
    """A structure not isometric to (3,3,3): trace triple (3, 5, (15+sqrt 89)/2)."""
    return torus_structure(3, 5, (15 + math.sqrt(89)) / 2)
