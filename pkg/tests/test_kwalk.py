from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_graph
from succinv.containment import is_topological_subgraph
from succinv.errors import ClassificationError, FormatError, InputError
from succinv.graph import Graph, complete_graph, cycle_graph, path_graph
from succinv.kwalk import (
    Walk,
    attachment_bound,
    bag_walk,
    check_connectable,
    connect_walks,
    format_edge_log,
    format_walk,
    merge_duplicate_adhesions,
    merge_walks,
    parse_edge_log,
    parse_walk,
    select_attachments,
    splice_walk,
    validate_kwalk,
)
from succinv.pipeline import build_walk, prepare_decomposition
from succinv.treedecomp import (
    HEURISTICS,
    MINOR_FREE,
    NEAR_BOUNDED_DEGREE,
    adhesion,
    classify_bags,
    decomposition_from_bags,
    heuristic_decompose,
    least_conforming_parameter,
    root_decomposition,
    validate,
)


def two_triangles() -> Graph:
    return Graph.from_edges(range(1, 6), [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)])


def star(leaves: int) -> Graph:
    return Graph.from_edges(range(1, leaves + 2), [(1, v) for v in range(2, leaves + 2)])


# -- validate_kwalk -------------------------------------------------------------


def test_validate_examples():
    assert validate_kwalk(cycle_graph(3), Walk((1, 2, 3)), 1).ok
    w = Walk((1, 2, 1, 3, 1, 4))
    assert not validate_kwalk(star(3), w, 2).ok
    assert validate_kwalk(star(3), w, 2).over_visited == ((1, 3),)
    report = validate_kwalk(star(3), w, 3)
    assert report.ok and report.certificate.visit_counts[1] == 3
    bad = validate_kwalk(path_graph(3), Walk((1, 3)), 2)
    assert not bad.ok and (1, 3) in bad.bad_steps and bad.missing == (2,)


def test_validate_single_vertex_and_foreign_vertices():
    assert validate_kwalk(Graph.from_edges([7], []), Walk((7,)), 1).ok
    report = validate_kwalk(path_graph(2), Walk((1, 2, 9)), 2)
    assert report.foreign == (9,) and "not in graph" in report.describe()
    with pytest.raises(InputError):
        Walk(())


# -- per-bag walks --------------------------------------------------------------


def test_bag_walk_examples():
    g = Graph.from_edges(range(1, 8), [(4, 5)])
    assert bag_walk(g, {4, 5}) == (Walk((4, 5)), [])
    assert bag_walk(g, {3, 1, 2}) == (Walk((1, 2, 3)), [(1, 2), (2, 3), (1, 3)])
    assert bag_walk(g, {7}) == (Walk((7,)), [])
    assert bag_walk(Graph.from_edges([1, 2], []), {1, 2}) == (Walk((1, 2)), [(1, 2)])
    with pytest.raises(InputError):
        bag_walk(g, set())


# -- merging ---------------------------------------------------------------------


def test_merge_example():
    g = Graph.from_edges(range(4, 8), [(4, 5), (6, 7)])
    merged = merge_duplicate_adhesions(g, [Walk((4, 5)), Walk((6, 7))])
    assert merged.walk == Walk((4, 5, 6, 7))
    assert merged.added == [(5, 6), (4, 7)]
    assert merged.cut_pairs == [(4, 5), (6, 7)]
    assert validate_kwalk(g.with_edges(merged.added), merged.walk, 1).ok


def test_merge_with_singletons():
    g = Graph.from_edges([8, 9], [])
    merged = merge_walks(g, [Walk((8,)), Walk((9,))])
    assert merged.walk == Walk((8, 9)) and merged.added == [(8, 9)]
    assert validate_kwalk(g.with_edges(merged.added), merged.walk, 1).ok


@given(st.lists(st.integers(1, 4), min_size=2, max_size=5))
def test_merge_keeps_visit_counts(lengths):
    walks, start = [], 1
    for n in lengths:
        walks.append(Walk(tuple(range(start, start + n))))
        start += n
    verts = range(1, start)
    g = Graph.from_edges(verts, [e for w in walks for e in map(tuple, map(sorted, w.steps())) if e[0] != e[1]])
    merged = merge_walks(g, walks)
    assert merged.walk.counts() == sum((w.counts() for w in walks), start=merged.walk.counts().__class__())
    assert validate_kwalk(g.with_edges(merged.added), merged.walk, 1).ok


def test_merge_rejects_overlapping_walks():
    with pytest.raises(InputError):
        merge_walks(path_graph(3), [Walk((1, 2)), Walk((2, 3))])
    with pytest.raises(InputError):
        merge_walks(path_graph(3), [Walk((1, 2))])


# -- attachments -----------------------------------------------------------------


def test_attachment_bound_example():
    assert attachment_bound(2, 1) == 4


def test_select_attachments_examples():
    plan = select_attachments([frozenset({3})], complete_graph(3), 1)
    assert dict(plan.f) == {0: 3} and plan.load() == {3: 1}
    cliques = [frozenset({1, 2}), frozenset({2, 3}), frozenset({1, 3})]
    plan = select_attachments(cliques, complete_graph(3), 2)
    assert dict(plan.f) == {0: 1, 1: 2, 2: 1}
    assert plan.conforming and plan.M == attachment_bound(2, 2)
    assert all(plan.f[i] in c for i, c in enumerate(cliques))
    assert max(plan.load().values()) <= plan.M


def test_select_attachments_flags_degree_overflow():
    cliques = [frozenset({1, 2}), frozenset({2, 3}), frozenset({1, 3})]
    plan = select_attachments(cliques, complete_graph(3), 1)
    assert not plan.conforming and plan.d == 2 and plan.notes
    assert max(plan.load().values()) <= plan.M


def test_select_attachments_minor_free_uses_degeneracy():
    cliques = [frozenset({1, 2}), frozenset({2, 3}), frozenset({3, 4})]
    plan = select_attachments(cliques, path_graph(4), 3, MINOR_FREE)
    assert plan.d == 1 and plan.conforming


def test_select_attachments_preconditions():
    with pytest.raises(InputError):
        select_attachments([frozenset({1}), frozenset({1})], path_graph(2), 1)
    with pytest.raises(InputError):
        select_attachments([frozenset()], path_graph(2), 1)


# -- splicing ---------------------------------------------------------------------


def test_splice_example():
    g = two_triangles()
    w, added = splice_walk(Walk((1, 2, 3)), 3, Walk((4, 5)), 4, g)
    assert w == Walk((1, 2, 3, 4, 5, 4, 3)) and added == []
    assert dict(w.counts()) == {1: 1, 2: 1, 3: 2, 4: 2, 5: 1}
    assert validate_kwalk(g, w, 2).ok


def test_splice_singleton_child():
    g = Graph.from_edges([1, 2, 9], [(1, 2), (1, 9)])
    w, added = splice_walk(Walk((1, 2)), 1, Walk((9,)), 9, g)
    assert w == Walk((1, 9, 1, 2)) and added == []
    assert w.counts()[1] == 2 and w.counts()[9] == 1
    assert validate_kwalk(g, w, 2).ok


def test_splice_adds_missing_edge():
    g = Graph.from_edges(range(1, 6), [(1, 2), (2, 3), (1, 3), (4, 5)])
    w, added = splice_walk(Walk((1, 2, 3)), 2, Walk((4, 5)), 5, g)
    assert added == [(2, 5)]
    assert w == Walk((1, 2, 5, 4, 5, 2, 3))
    assert validate_kwalk(g.with_edges(added), w, 2).ok


def test_splice_into_single_vertex_walk():
    g = Graph.from_edges([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    w, _ = splice_walk(Walk((1,)), 1, Walk((2, 3)), 2, g)
    assert w == Walk((1, 2, 3, 2)) and validate_kwalk(g, w, 2).ok


def test_splice_errors():
    with pytest.raises(InputError):
        splice_walk(Walk((1, 2)), 1, Walk((4, 5)), 9, path_graph(5))
    with pytest.raises(InputError):
        splice_walk(Walk((1, 2)), 3, Walk((4, 5)), 4, path_graph(5))


# -- connecting -------------------------------------------------------------------


def test_connect_two_triangles():
    g = two_triangles()
    td = decomposition_from_bags(g, {1: {1, 2, 3}, 2: {3, 4, 5}}, [(1, 2)])
    rd, torso_edges = prepare_decomposition(td, 1)
    cls = classify_bags(rd, 2)
    result = connect_walks(rd, cls, 2)
    assert torso_edges == [] and result.edge_log == ()
    assert result.walk == Walk((1, 2, 3, 4, 5, 4, 3))
    assert result.certificate.realized == 2
    assert result.plans[1].f == {0: 3}
    assert result.k == 1 and result.k_prime == result.k + result.M + 1


def test_connect_single_bag():
    g = cycle_graph(5)
    rd, _ = prepare_decomposition(heuristic_decompose(g, "single-bag"))
    result = connect_walks(rd, classify_bags(rd, 2), 2)
    assert result.walk == Walk((1, 2, 3, 4, 5))
    # the bound k + M + 1 = 2 is certified; the walk itself is a 1-walk
    assert result.certificate.realized == 1 and result.k_prime == 2
    assert validate_kwalk(result.graph, result.walk, 1).ok
    assert result.edge_log == ()


def test_connect_path_min_degree():
    g = path_graph(5)
    build = build_walk(heuristic_decompose(g, "min-degree"), 1)
    result = build.connection
    assert validate_kwalk(result.graph, result.walk, result.k_prime).ok
    bags = build.rooted.base.bags
    closures = sum(1 for t in bags if len(bags[t] - build.rooted.alpha[t]) >= 2)
    assert len(result.edge_log) <= len(g.vertices) + closures


def test_connect_disconnected_host():
    g = Graph.from_edges(range(1, 8), [(1, 2), (3, 4), (4, 5), (6, 7)])
    build = build_walk(heuristic_decompose(g, "min-fill"), 1)
    result = build.connection
    assert validate_kwalk(result.graph, result.walk, result.k_prime).ok
    assert g.edges <= result.graph.edges


def test_connect_requires_preparation():
    g = Graph.from_edges(range(1, 5), [(1, 2), (3, 4)])
    td = decomposition_from_bags(g, {1: {1, 2, 3}, 2: {2, 3, 4}}, [(1, 2)])
    rd = root_decomposition(td, 1)
    with pytest.raises(InputError, match="clique"):
        check_connectable(rd)
    rd, _ = prepare_decomposition(heuristic_decompose(complete_graph(5), "single-bag"))
    with pytest.raises(ClassificationError):
        connect_walks(rd, classify_bags(rd, 3), 3)


def _random_run(seed: int, method: str, max_n: int = 20):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, max_n), rng.choice([0.1, 0.2, 0.3, 0.5]))
    td = heuristic_decompose(g, method)
    rd, _ = prepare_decomposition(td)
    c = least_conforming_parameter(rd)
    return g, c, build_walk(td, c)


@settings(max_examples=80)
@given(st.integers(0, 10**6), st.sampled_from(HEURISTICS))
def test_connect_walks_certificate_properties(seed, method):
    g, c, build = _random_run(seed, method)
    result = build.connection
    assert g.edges <= result.graph.edges
    assert validate_kwalk(result.graph, result.walk, result.k_prime).ok
    assert result.k_prime == result.k + result.M + 1
    assert result.max_frontier_visits <= result.k + 1
    assert validate(result.decomposition).ok
    assert adhesion(result.decomposition) <= c + 2
    logged = {(u, v) for u, v, _ in build.edge_log}
    assert result.graph.edges == g.edges | logged


@settings(max_examples=20)
@given(st.integers(0, 10**6), st.sampled_from(HEURISTICS))
def test_connect_walks_is_deterministic(seed, method):
    _, _, first = _random_run(seed, method)
    _, _, second = _random_run(seed, method)
    assert first.connection.walk == second.connection.walk
    assert first.edge_log == second.edge_log


def test_walk_and_edge_log_files():
    w = Walk((1, 2, 3, 4, 5, 4, 3))
    text = format_walk(w, 2)
    assert text == "walk 2 7\n1 2 3 4 5 4 3\n"
    assert parse_walk(text) == (w, 2)
    with pytest.raises(FormatError):
        parse_walk("walk 2 3\n1 2\n")
    with pytest.raises(FormatError):
        parse_walk("path 2 1\n1\n")
    log = [(1, 2, "bag-cycle"), (3, 5, "attach")]
    assert parse_edge_log(format_edge_log(log)) == [(1, 2), (3, 5)]
    with pytest.raises(FormatError):
        parse_edge_log("- 1 2\n")


def test_near_bounded_tag_drives_d():
    rd, _ = prepare_decomposition(heuristic_decompose(star(6), "min-fill"))
    cls = classify_bags(rd, 1)
    assert set(cls.tags.values()) == {NEAR_BOUNDED_DEGREE}
    result = connect_walks(rd, cls, 1)
    assert result.d <= 1 and validate_kwalk(result.graph, result.walk, result.k_prime).ok


def test_bag_cycle_can_raise_the_excluded_clique():
    # P3 conforms at c=1 and has no triangle, but closing its bag into a cycle adds 1-3
    g = path_graph(3)
    conn = build_walk(heuristic_decompose(g, "single-bag"), 1).connection
    assert [e[:2] for e in conn.edge_log] == [(1, 3)]
    assert is_topological_subgraph(complete_graph(3), g) is None
    assert is_topological_subgraph(complete_graph(3), conn.graph) is not None
    assert least_conforming_parameter(conn.decomposition) == 2
