import networkx as nx
import numpy as np
import pytest

from sublin_csp.graph import Graph

ACCEPTANCE_LINES = []


def from_edges(n, edges, **kw):
    return Graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2), **kw)


def from_nx(h):
    h = nx.convert_node_labels_to_integers(h)
    return from_edges(h.number_of_nodes(), list(h.edges()))


def cycle(n):
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return from_nx(nx.complete_graph(n))


def path(n):
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves):
    return from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen():
    return from_nx(nx.petersen_graph())


def two_triangles():
    return from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


@pytest.fixture
def record_acceptance():
    """Print and remember one PASS/FAIL line per acceptance criterion."""
    def rec(number, title, ok, **detail):
        extra = " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                         for k, v in detail.items())
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title}" + (f" [{extra}]" if extra else "")
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok
    return rec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
