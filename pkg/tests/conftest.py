import pathlib
import sys

import pytest

from tsgraph import ObservationScheme, TsDagTemplate, random_corpus, ts_dmag

sys.path.insert(0, str(pathlib.Path(__file__).parent))

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def d_a():
    return TsDagTemplate(2, frozenset({(0, 0, 1), (0, 1, 1)}), ("O1", "O2"))


@pytest.fixture(scope="session")
def d_b():
    return TsDagTemplate(3, frozenset({(2, 0, 0), (2, 1, 0)}), ("O1", "O2", "L"))


@pytest.fixture(scope="session")
def m_a(d_a):
    return ts_dmag(d_a, ObservationScheme((0, 1), 2))


@pytest.fixture(scope="session")
def m_b(d_b):
    return ts_dmag(d_b, ObservationScheme((0, 1), 1))


@pytest.fixture(scope="session")
def corpus():
    return random_corpus(500, seed=1)


@pytest.fixture(scope="session")
def small_corpus(corpus):
    return corpus[:120]


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    from _report import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
