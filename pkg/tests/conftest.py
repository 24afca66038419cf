"""Shared fixtures plus the acceptance-criteria summary reporter."""

import numpy as np
import pytest
from hypothesis import settings

from cutbal.graph import DiGraph

# property tests replay a fixed example sequence, so runs are reproducible
settings.register_profile("deterministic", derandomize=True)
settings.load_profile("deterministic")

ACCEPTANCE_RESULTS = []


def record_acceptance(number, passed, detail):
    """Collect one acceptance-criterion outcome for the terminal summary."""
    ACCEPTANCE_RESULTS.append((number, bool(passed), detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status} - {detail}")


def random_digraph(rng, n, m, w_hi=4):
    """Random multigraph with integer weights in [1, w_hi)."""
    edges = []
    for _ in range(m):
        a, b = rng.integers(0, n, 2)
        while a == b:
            a, b = rng.integers(0, n, 2)
        edges.append((int(a), int(b), float(rng.integers(1, w_hi))))
    return DiGraph(n, edges)


def bidirected(g):
    """Each edge duplicated in reverse: the directed stand-in for treating
    ``g`` as an undirected capacitated graph."""
    rows = g.edge_list()
    return DiGraph(g.n, rows + [(h, t, w) for t, h, w in rows])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
