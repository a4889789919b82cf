"""Tree decompositions: validation, rooting, adhesion sets, torsos and surgery."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from succinv.containment import MAX_MINOR_HOST, MAX_PATTERN, is_minor
from succinv.errors import CapabilityError, FormatError, InputError
from succinv.graph import Edge, Graph, complete_graph, induced_subgraph, norm_edge

NEAR_BOUNDED_DEGREE = "near-bounded-degree"
MINOR_FREE = "minor-free"

HEURISTICS = ("single-bag", "min-degree", "min-fill")


@dataclass(frozen=True)
class TreeDecomposition:
    tree: Graph
    bags: Mapping[int, frozenset[int]]
    host: Graph

    def bag(self, t: int) -> frozenset[int]:
        try:
            return self.bags[t]
        except KeyError:
            raise InputError(f"unknown tree node {t}") from None

    def nodes(self) -> list[int]:
        return sorted(self.tree.vertices)

    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def with_host(self, host: Graph) -> TreeDecomposition:
        return TreeDecomposition(self.tree, self.bags, host)


@dataclass(frozen=True)
class ValidationReport:
    """``failures`` lists ``(condition, witness)`` pairs; empty means valid."""

    failures: tuple[tuple[str, object], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def conditions(self) -> set[str]:
        return {c for c, _ in self.failures}

    def describe(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(f"{c}: {w}" for c, w in self.failures)


def validate(td: TreeDecomposition) -> ValidationReport:
    """Check the three decomposition conditions (and that the tree is a tree)."""
    if set(td.bags) != set(td.tree.vertices):
        dangling = sorted(set(td.bags) ^ set(td.tree.vertices))
        raise InputError(f"bag ids and tree nodes disagree on {dangling}")
    failures: list[tuple[str, object]] = []
    if not td.tree.is_tree():
        failures.append(("tree", "decomposition tree is not a tree"))
    for t in td.nodes():
        stray = td.bags[t] - td.host.vertices
        if stray:
            failures.append(("bag-vertices", (t, min(stray))))
    covered = set().union(*td.bags.values()) if td.bags else set()
    for v in sorted(td.host.vertices - covered):
        failures.append(("coverage", v))
    for u, v in td.host.sorted_edges():
        if not any(u in b and v in b for b in td.bags.values()):
            failures.append(("edge", (u, v)))
    for v in sorted(td.host.vertices & covered):
        holders = frozenset(t for t, b in td.bags.items() if v in b)
        start = min(holders)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in td.tree.adjacency[x]:
                if y in holders and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != holders:
            failures.append(("connectivity", v))
    return ValidationReport(tuple(failures))


def adhesion(td: TreeDecomposition) -> int:
    """Largest bag intersection over adjacent tree nodes (0 for one node)."""
    return max((len(td.bags[s] & td.bags[t]) for s, t in td.tree.edges), default=0)


def adhesion_all_pairs(td: TreeDecomposition) -> int:
    """Largest bag intersection over all pairs of distinct nodes."""
    nodes = td.nodes()
    return max((len(td.bags[s] & td.bags[t]) for s, t in combinations(nodes, 2)), default=0)


def torso(td: TreeDecomposition, t: int) -> Graph:
    bag = td.bag(t)
    edges = set(induced_subgraph(td.host, bag).edges)
    for u in td.tree.adjacency[t]:
        edges.update(combinations(sorted(bag & td.bags[u]), 2))
    return Graph(bag, frozenset(edges))


@dataclass(frozen=True)
class RootedDecomposition:
    """A decomposition with a root; ``alpha[t]`` is the bag intersection with the parent."""

    base: TreeDecomposition
    root: int
    parent: Mapping[int, int | None]
    alpha: Mapping[int, frozenset[int]]
    children: Mapping[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def host(self) -> Graph:
        return self.base.host

    def bag(self, t: int) -> frozenset[int]:
        return self.base.bag(t)

    def order(self) -> list[int]:
        """Breadth-first node order from the root, children by ascending id."""
        out = [self.root]
        for t in out:
            out.extend(self.children[t])
        return out

    def with_host(self, host: Graph) -> RootedDecomposition:
        return RootedDecomposition(self.base.with_host(host), self.root, self.parent, self.alpha, self.children)


def _rooted(tree: Graph, bags: Mapping[int, frozenset[int]], host: Graph, root: int) -> RootedDecomposition:
    parent: dict[int, int | None] = {root: None}
    queue = deque([root])
    while queue:
        t = queue.popleft()
        for u in sorted(tree.adjacency[t]):
            if u not in parent:
                parent[u] = t
                queue.append(u)
    if len(parent) != len(tree.vertices):
        raise InputError("decomposition tree is disconnected")
    children: dict[int, list[int]] = {t: [] for t in tree.vertices}
    alpha: dict[int, frozenset[int]] = {}
    for t, p in parent.items():
        if p is None:
            alpha[t] = frozenset()
        else:
            children[p].append(t)
            alpha[t] = bags[p] & bags[t]
    return RootedDecomposition(
        TreeDecomposition(tree, dict(bags), host),
        root,
        parent,
        alpha,
        {t: tuple(sorted(cs)) for t, cs in children.items()},
    )


def root_decomposition(td: TreeDecomposition, r: int | None = None) -> RootedDecomposition:
    """Root ``td`` at ``r`` (default: lowest node id)."""
    if r is None:
        r = min(td.tree.vertices)
    if r not in td.tree.vertices:
        raise InputError(f"unknown tree node {r}")
    return _rooted(td.tree, td.bags, td.host, r)


def _reparented(rd: RootedDecomposition, parent: Mapping[int, int | None]) -> RootedDecomposition:
    tree_edges = [(t, p) for t, p in parent.items() if p is not None]
    tree = Graph.from_edges(parent.keys(), tree_edges)
    bags = {t: rd.base.bags[t] for t in parent}
    return _rooted(tree, bags, rd.host, rd.root)


def make_torsos_explicit(rd: RootedDecomposition) -> tuple[Graph, RootedDecomposition, list[Edge]]:
    """Add clique edges on every adhesion set; return host, decomposition, added edges."""
    added = set()
    for t in rd.order():
        for u, v in combinations(sorted(rd.alpha[t]), 2):
            if not rd.host.has_edge(u, v):
                added.add(norm_edge(u, v))
    host = rd.host.with_edges(added)
    return host, rd.with_host(host), sorted(added)


def prune_redundant_bags(rd: RootedDecomposition) -> RootedDecomposition:
    """Contract every non-root node whose bag lies inside its parent's bag."""
    parent = dict(rd.parent)
    for t in reversed(rd.order()):
        p = parent[t]
        if p is not None and rd.bag(t) <= rd.bag(p):
            for s, q in parent.items():
                if q == t:
                    parent[s] = p
            del parent[t]
    if len(parent) == len(rd.parent):
        return rd
    return _reparented(rd, parent)


def normalize_empty_adhesions(rd: RootedDecomposition) -> RootedDecomposition:
    """Lift children ``s`` of non-root ``t`` with ``alpha_s ⊆ alpha_t`` to ``t``'s parent.

    Repeats until every such child adds a vertex beyond ``alpha_t``. Lifting
    keeps the decomposition valid and leaves ``alpha_s`` unchanged.
    """
    parent = dict(rd.parent)
    alpha = rd.alpha
    changed = True
    while changed:
        changed = False
        for s in sorted(parent):
            t = parent[s]
            if t is None or parent[t] is None:
                continue
            if alpha[s] <= alpha[t]:
                parent[s] = parent[t]
                changed = True
    if parent == dict(rd.parent):
        return rd
    return _reparented(rd, parent)


@dataclass(frozen=True)
class BagClassification:
    """Per-node structural tags for parameter ``c``.

    ``failures`` holds the nodes whose torso has more than ``c`` vertices of
    degree above ``c`` and contains a ``K_c`` minor.
    """

    c: int
    tags: Mapping[int, str]
    failures: tuple[int, ...]
    adhesion: int

    @property
    def conforming(self) -> bool:
        return not self.failures and self.adhesion <= self.c

    def describe(self) -> str:
        parts = [f"c={self.c}", f"adhesion={self.adhesion}"]
        if self.adhesion > self.c:
            parts.append("adhesion exceeds c")
        if self.failures:
            parts.append("unclassified nodes " + ",".join(map(str, self.failures)))
        return " ".join(parts)


def high_degree_count(g: Graph, c: int) -> int:
    return sum(1 for v in g.vertices if g.degree(v) > c)


def classify_bags(
    rd: RootedDecomposition | TreeDecomposition,
    c: int,
    *,
    max_minor_host: int | None = MAX_MINOR_HOST,
    force: bool = False,
) -> BagClassification:
    """Tag each node as near-bounded-degree (checked first) or minor-free."""
    if c < 1:
        raise InputError("c must be >= 1")
    td = rd.base if isinstance(rd, RootedDecomposition) else rd
    tags: dict[int, str] = {}
    failures = []
    pattern = complete_graph(c)
    for t in td.nodes():
        tor = torso(td, t)
        if high_degree_count(tor, c) <= c:
            tags[t] = NEAR_BOUNDED_DEGREE
            continue
        if c > MAX_PATTERN and not force:
            raise CapabilityError(f"node {t} needs a K_{c} minor test; the oracle supports c <= {MAX_PATTERN}")
        if is_minor(pattern, tor, max_host=max_minor_host, force=force) is None:
            tags[t] = MINOR_FREE
        else:
            failures.append(t)
    return BagClassification(c, tags, tuple(failures), adhesion(td))


def degree_parameter(g: Graph) -> int:
    """Least ``c >= 1`` with at most ``c`` vertices of degree above ``c``."""
    degrees = sorted((g.degree(v) for v in g.vertices), reverse=True)
    c = 1
    while sum(1 for d in degrees if d > c) > c:
        c += 1
    return c


def least_conforming_parameter(
    rd: RootedDecomposition | TreeDecomposition,
    *,
    use_minor_oracle: bool = True,
    max_minor_host: int | None = 10,
) -> int:
    """Least ``c`` for which :func:`classify_bags` reports a conforming decomposition.

    The degree criterion always holds at ``c = max degree``, so this
    terminates. Minor tests are only tried on torsos within the host guard.
    """
    td = rd.base if isinstance(rd, RootedDecomposition) else rd
    torsos = [torso(td, t) for t in td.nodes()]
    lo = max(1, adhesion(td))
    hi = max([lo] + [degree_parameter(t) for t in torsos])
    for c in range(lo, hi):
        ok = True
        for tor in torsos:
            if high_degree_count(tor, c) <= c:
                continue
            if (
                not use_minor_oracle
                or c > MAX_PATTERN
                or (max_minor_host is not None and len(tor.vertices) > max_minor_host)
                or is_minor(complete_graph(c), tor, max_host=None) is not None
            ):
                ok = False
                break
        if ok:
            return c
    return hi


# -- heuristics --------------------------------------------------------------


def heuristic_decompose(g: Graph, method: str = "min-fill") -> TreeDecomposition:
    """Build a valid decomposition by one bag or by greedy vertex elimination.

    Elimination creates one bag per vertex (the vertex and its later
    neighbours in the filled graph); bags contained in a tree neighbour's
    bag are contracted away and nodes are renumbered ``1..m``. Ties go to
    the lowest vertex id.
    """
    if method not in HEURISTICS:
        raise InputError(f"unknown heuristic {method!r}; choose from {', '.join(HEURISTICS)}")
    if method == "single-bag" or len(g.vertices) <= 1:
        return TreeDecomposition(Graph(frozenset({1})), {1: frozenset(g.vertices)}, g)

    adj = {v: set(g.adjacency[v]) for v in g.vertices}
    alive = set(g.vertices)
    order: list[int] = []
    bag_of: dict[int, frozenset[int]] = {}

    def fill(v: int) -> int:
        ns = sorted(adj[v])
        return sum(1 for a, b in combinations(ns, 2) if b not in adj[a])

    while alive:
        if method == "min-degree":
            v = min(alive, key=lambda x: (len(adj[x]), x))
        else:
            v = min(alive, key=lambda x: (fill(x), len(adj[x]), x))
        ns = adj[v]
        bag_of[v] = frozenset(ns | {v})
        for a, b in combinations(sorted(ns), 2):
            adj[a].add(b)
            adj[b].add(a)
        for u in ns:
            adj[u].discard(v)
        del adj[v]
        alive.remove(v)
        order.append(v)

    position = {v: i for i, v in enumerate(order)}
    node = {v: i + 1 for i, v in enumerate(order)}
    tree_edges = []
    roots = []
    for v in order:
        later = bag_of[v] - {v}
        if later:
            nxt = min(later, key=position.__getitem__)
            tree_edges.append((node[v], node[nxt]))
        else:
            roots.append(node[v])
    last = roots[-1]
    tree_edges += [(r, last) for r in roots[:-1]]
    bags = {node[v]: bag_of[v] for v in order}
    tree_adj = {t: set() for t in bags}
    for a, b in tree_edges:
        tree_adj[a].add(b)
        tree_adj[b].add(a)
    return _contract_subset_bags(bags, tree_adj, g)


def _contract_subset_bags(bags: dict[int, frozenset[int]], tree_adj: dict[int, set[int]], g: Graph) -> TreeDecomposition:
    changed = True
    while changed:
        changed = False
        for t in sorted(bags):
            keep = next((u for u in sorted(tree_adj[t]) if bags[t] <= bags[u]), None)
            if keep is None:
                continue
            for u in tree_adj[t]:
                if u != keep:
                    tree_adj[u].discard(t)
                    tree_adj[u].add(keep)
                    tree_adj[keep].add(u)
            tree_adj[keep].discard(t)
            del tree_adj[t], bags[t]
            changed = True
            break
    renumber = {t: i + 1 for i, t in enumerate(sorted(bags))}
    edges = {norm_edge(renumber[a], renumber[b]) for a in tree_adj for b in tree_adj[a]}
    tree = Graph(frozenset(renumber.values()), frozenset(edges))
    return TreeDecomposition(tree, {renumber[t]: b for t, b in bags.items()}, g)


# -- file format -------------------------------------------------------------


def parse_td(text: str, host: Graph) -> TreeDecomposition:
    """Parse ``td <#bags> <maxbagsize> <n>``, ``b <i> <v...>`` lines and tree edges ``<i> <j>``."""
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "td":
                if header is not None or len(toks) != 4:
                    raise FormatError("expected one header 'td <#bags> <maxbagsize> <n>'", lineno)
                header = tuple(int(x) for x in toks[1:])
            elif toks[0] == "b":
                if header is None:
                    raise FormatError("bag line before header", lineno)
                i = int(toks[1])
                if i in bags:
                    raise FormatError(f"bag {i} declared twice", lineno)
                bags[i] = frozenset(int(x) for x in toks[2:])
            else:
                if header is None or len(toks) != 2:
                    raise FormatError(f"expected tree edge '<i> <j>', got {line!r}", lineno)
                edges.append((int(toks[0]), int(toks[1])))
        except ValueError:
            raise FormatError(f"non-integer token in {line!r}", lineno) from None
    if header is None:
        raise FormatError("missing 'td' header")
    nbags, maxbag, n = header
    if len(bags) != nbags or set(bags) != set(range(1, nbags + 1)):
        raise FormatError(f"header announces bags 1..{nbags}, found {sorted(bags)}")
    if max((len(b) for b in bags.values()), default=0) != maxbag:
        raise FormatError("header max bag size does not match the bags")
    if n != len(host.vertices):
        raise FormatError(f"header announces {n} host vertices, host has {len(host.vertices)}")
    for a, b in edges:
        if a not in bags or b not in bags or a == b:
            raise FormatError(f"tree edge {a} {b} references unknown bags")
    try:
        tree = Graph.from_edges(bags, edges)
    except InputError as exc:
        raise FormatError(str(exc)) from None
    return TreeDecomposition(tree, bags, host)


def format_td(td: TreeDecomposition) -> str:
    nodes = td.nodes()
    if nodes != list(range(1, len(nodes) + 1)):
        raise InputError("decomposition file format needs node ids 1..m")
    maxbag = max((len(b) for b in td.bags.values()), default=0)
    out = [f"td {len(nodes)} {maxbag} {len(td.host.vertices)}"]
    out += ["b " + " ".join(map(str, [t, *sorted(td.bags[t])])) for t in nodes]
    out += [f"{a} {b}" for a, b in td.tree.sorted_edges()]
    return "\n".join(out) + "\n"


def read_td(path: str | Path, host: Graph) -> TreeDecomposition:
    return parse_td(Path(path).read_text(encoding="utf-8"), host)


def decomposition_from_bags(
    host: Graph, bags: Mapping[int, Iterable[int]], tree_edges: Iterable[tuple[int, int]]
) -> TreeDecomposition:
    bags = {t: frozenset(b) for t, b in bags.items()}
    return TreeDecomposition(Graph.from_edges(bags, tree_edges), bags, host)
