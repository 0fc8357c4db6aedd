import pytest

from toricsyz import Config, ResolutionEngine, Semigroup

EXAMPLE_COLUMNS = [[4, 1], [5, 1], [7, 1], [8, 1]]


@pytest.fixture(scope="session")
def example_semigroup():
    return Semigroup(2, EXAMPLE_COLUMNS)


@pytest.fixture(scope="session")
def numerical_semigroup():
    return Semigroup(1, [[2], [3]])


@pytest.fixture()
def engine(example_semigroup):
    return ResolutionEngine(example_semigroup, Config())


@pytest.fixture()
def debug_engine(example_semigroup):
    return ResolutionEngine(example_semigroup, Config(debug_checks=True))
