import itertools

import pytest

from qdouble.catalog import DEFAULT, load
from qdouble.cochain import pullback, standard_cocycle_cyclic
from qdouble.group import symmetric


@pytest.fixture(scope="session")
def catalog():
    return [(gd, cd, *load(gd, cd)) for gd, cd in DEFAULT]


def sign_cocycle_s3():
    """Nontrivial cocycle on S3 pulled back from Z2 along the sign map."""
    g = symmetric(3)
    sign = [sum(p[i] > p[j] for i in range(3) for j in range(i + 1, 3)) % 2 for p in itertools.permutations(range(3))]
    return g, pullback(standard_cocycle_cyclic(2, 1), g, sign)


@pytest.fixture(scope="session")
def s3_sign():
    return sign_cocycle_s3()


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
