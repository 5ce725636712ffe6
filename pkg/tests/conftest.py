import random

import pytest

from helpers import CYCLE22, FLIP22, ID22, graph22

from kgraph import KGraph


@pytest.fixture
def id22():
    return graph22(ID22)


@pytest.fixture
def flip22():
    return graph22(FLIP22)


@pytest.fixture
def cyc22():
    return graph22(CYCLE22)


@pytest.fixture
def id23():
    return KGraph.identity((2, 3))


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {detail}")
