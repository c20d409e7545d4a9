import random

import pytest

from netinterp.graph import Graph

# Lines collected by the acceptance checks, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def random_graph(n: int, p: float, rng: random.Random, directed: bool = False) -> Graph:
    g = Graph(n, directed=directed)
    for u in range(n):
        for v in range(n):
            if u != v and (directed or u < v) and rng.random() < p:
                g.add_edge(u, v)
    return g


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
