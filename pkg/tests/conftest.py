import pytest

from tourney_codes import enumerate_tournaments, paley_tournament, parse_line

# The four isomorphism classes on 4 vertices, in the order whose embedding
# dimensions are 3, 2, 3, 2.  test_tournament re-derives these lines from
# the explicit adjacency matrices.
ORDER4_LINES = ("4:111111", "4:111010", "4:011101", "4:011011")


@pytest.fixture
def cycle3():
    return parse_line("3:101")


@pytest.fixture
def transitive3():
    return parse_line("3:111")


@pytest.fixture
def two_vertex():
    return parse_line("2:1")


@pytest.fixture
def order4():
    return [parse_line(line) for line in ORDER4_LINES]


@pytest.fixture(scope="session")
def paley3():
    return paley_tournament(3)


@pytest.fixture(scope="session")
def paley7():
    return paley_tournament(7)


@pytest.fixture(scope="session")
def paley11():
    return paley_tournament(11)


@pytest.fixture(scope="session")
def classes_by_order():
    """All isomorphism classes for n = 2..7, keyed by n."""
    return {n: enumerate_tournaments(n) for n in range(2, 8)}
