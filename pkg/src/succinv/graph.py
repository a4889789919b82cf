"""Undirected simple graphs over positive integer vertex ids."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path

from succinv.errors import FormatError, InputError

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """An immutable simple graph.

    Edges are stored as sorted pairs ``(u, v)`` with ``u < v``. Use
    :meth:`from_edges` to build a graph from arbitrary pairs; the
    constructor only checks invariants.
    """

    vertices: frozenset[int]
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for v in self.vertices:
            if not isinstance(v, int) or v < 1:
                raise InputError(f"vertex ids must be positive integers, got {v!r}")
        for e in self.edges:
            u, v = e
            if u >= v:
                raise InputError(f"edge {e} is not normalised (loop or unsorted)")
            if u not in self.vertices or v not in self.vertices:
                raise InputError(f"edge {e} has an endpoint outside the vertex set")

    @classmethod
    def from_edges(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]] = ()) -> Graph:
        vs = frozenset(vertices)
        es = set()
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at {u}")
            es.add(norm_edge(u, v))
        return cls(vs, frozenset(es))

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(ns) for v, ns in adj.items()}

    def neighbours(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and norm_edge(u, v) in self.edges

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.vertices))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def union(self, other: Graph) -> Graph:
        return Graph(self.vertices | other.vertices, self.edges | other.edges)

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> Graph:
        return Graph.from_edges(self.vertices, list(self.edges) + list(edges))

    def is_subgraph_of(self, other: Graph) -> bool:
        return self.vertices <= other.vertices and self.edges <= other.edges

    def components(self) -> list[frozenset[int]]:
        """Connected components, ordered by their smallest vertex."""
        seen: set[int] = set()
        comps = []
        for start in sorted(self.vertices):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in self.adjacency[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_tree(self) -> bool:
        return len(self.vertices) >= 1 and self.is_connected() and len(self.edges) == len(self.vertices) - 1

    def __repr__(self) -> str:
        return f"Graph(n={len(self.vertices)}, edges={self.sorted_edges()})"


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    s = frozenset(s)
    unknown = s - g.vertices
    if unknown:
        raise InputError(f"unknown vertex ids {sorted(unknown)}")
    return Graph(s, frozenset(e for e in g.edges if e[0] in s and e[1] in s))


def clique_on(s: Iterable[int]) -> Graph:
    s = frozenset(s)
    if not s:
        raise InputError("clique_on needs a nonempty vertex set")
    return Graph(s, frozenset(combinations(sorted(s), 2)))


def complete_graph(n: int) -> Graph:
    """K_n on the vertex set 1..n."""
    return clique_on(range(1, n + 1)) if n else Graph(frozenset())


def path_graph(n: int) -> Graph:
    return Graph.from_edges(range(1, n + 1), [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    return Graph.from_edges(range(1, n + 1), edges)


def join_with_clique(g: Graph, c: int) -> Graph:
    """Return ``G ⊕ K_c``: ``g`` plus a fresh ``c``-clique joined to every vertex.

    The clique gets ids ``max(V)+1 .. max(V)+c``.
    """
    if c < 1:
        raise InputError("join_with_clique needs c >= 1")
    start = max(g.vertices, default=0) + 1
    fresh = list(range(start, start + c))
    edges = set(g.edges)
    edges.update(combinations(fresh, 2))
    edges.update(norm_edge(v, a) for v in g.vertices for a in fresh)
    return Graph(g.vertices | frozenset(fresh), frozenset(edges))


def degeneracy_order(g: Graph) -> tuple[list[int], int]:
    """Repeatedly remove a minimum-degree vertex (lowest id on ties).

    Returns the removal order and the largest degree seen at removal time.
    Every vertex has at most that many neighbours later in the order.
    """
    deg = {v: g.degree(v) for v in g.vertices}
    alive = set(g.vertices)
    order = []
    worst = 0
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        worst = max(worst, deg[v])
        order.append(v)
        alive.remove(v)
        for u in g.adjacency[v]:
            if u in alive:
                deg[u] -= 1
    return order, worst


# -- text format -------------------------------------------------------------


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_graph(text: str) -> Graph:
    """Parse ``graph <n> <m>`` followed by ``e <u> <v>`` lines."""
    lines = list(_content_lines(text))
    if not lines or lines[0][1][0] != "graph" or len(lines[0][1]) != 3:
        raise FormatError("expected header 'graph <n> <m>'", lines[0][0] if lines else None)
    try:
        n, m = int(lines[0][1][1]), int(lines[0][1][2])
    except ValueError:
        raise FormatError("header counts must be integers", lines[0][0]) from None
    edges: set[Edge] = set()
    for lineno, toks in lines[1:]:
        if toks[0] != "e" or len(toks) != 3:
            raise FormatError(f"expected 'e <u> <v>', got {' '.join(toks)!r}", lineno)
        try:
            u, v = int(toks[1]), int(toks[2])
        except ValueError:
            raise FormatError("edge endpoints must be integers", lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"endpoint out of range 1..{n}", lineno)
        if u == v:
            raise FormatError(f"loop edge at {u}", lineno)
        e = norm_edge(u, v)
        if e in edges:
            raise FormatError(f"duplicate edge {u} {v}", lineno)
        edges.add(e)
    if len(edges) != m:
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    return Graph(frozenset(range(1, n + 1)), frozenset(edges))


def format_graph(g: Graph) -> str:
    """Serialise ``g``; vertex ids must be exactly ``1..n``."""
    n = len(g.vertices)
    if g.vertices != frozenset(range(1, n + 1)):
        raise InputError("graph text format needs vertex ids 1..n")
    out = [f"graph {n} {len(g.edges)}"]
    out += [f"e {u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(out) + "\n"


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))
