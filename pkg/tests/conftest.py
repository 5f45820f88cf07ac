import pytest

from bertinilab.projgeom import ProjectiveScheme, parse_form


@pytest.fixture(scope="session")
def p1():
    return ProjectiveScheme(1, 1, name="P1")


@pytest.fixture(scope="session")
def p2():
    return ProjectiveScheme(2, 2, name="P2")


@pytest.fixture(scope="session")
def conic():
    return ProjectiveScheme(2, 1, [parse_form("X^2+Y^2+Z^2", 2)],
                            name="sum-of-squares conic")
