from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings

from succinv.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def atlas_graphs(max_vertices: int) -> list[Graph]:
    """Every graph on 1..max_vertices vertices up to isomorphism, relabelled to 1..n."""
    out = []
    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if 1 <= n <= max_vertices:
            out.append(Graph.from_edges(range(1, n + 1), [(u + 1, v + 1) for u, v in h.edges()]))
    return out


@pytest.fixture(scope="session")
def atlas5() -> list[Graph]:
    return atlas_graphs(5)


@pytest.fixture(scope="session")
def atlas6() -> list[Graph]:
    return atlas_graphs(6)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
