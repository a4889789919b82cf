"""Exhaustive minor and topological-subgraph search for small patterns.

Both searches are plain backtracking and only meant as desk-scale oracles.
They work on bitmasks over the host's vertices (sorted by id).
"""

from __future__ import annotations

from dataclasses import dataclass

from succinv.errors import CapabilityError
from succinv.graph import Edge, Graph, norm_edge

MAX_PATTERN = 6
MAX_MINOR_HOST = 16


@dataclass(frozen=True)
class MinorModel:
    """Branch sets of a minor, keyed by pattern vertex."""

    branch_sets: dict[int, frozenset[int]]


@dataclass(frozen=True)
class TopEmbedding:
    """Branch vertices and one host path per pattern edge.

    ``paths[(a, b)]`` runs from ``branch_vertices[a]`` to
    ``branch_vertices[b]`` for every pattern edge with ``a < b``.
    """

    branch_vertices: dict[int, int]
    paths: dict[Edge, tuple[int, ...]]


def _guard(h: Graph, g: Graph, max_pattern: int, max_host: int | None, force: bool) -> None:
    if force:
        return
    if len(h.vertices) > max_pattern:
        raise CapabilityError(
            f"pattern has {len(h.vertices)} vertices, guard is {max_pattern} (pass force=True to override)"
        )
    if max_host is not None and len(g.vertices) > max_host:
        raise CapabilityError(
            f"host has {len(g.vertices)} vertices, guard is {max_host} (pass force=True to override)"
        )


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _is_complete(h: Graph) -> bool:
    n = len(h.vertices)
    return len(h.edges) == n * (n - 1) // 2


def _pattern_order(h: Graph) -> list[int]:
    """Order pattern vertices so each one has as many earlier neighbours as possible."""
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(h.vertices)
    while remaining:
        def key(v: int) -> tuple[int, int, int]:
            return (-len(h.adjacency[v] & placed), -h.degree(v), v)

        v = min(remaining, key=key)
        order.append(v)
        placed.add(v)
        remaining.remove(v)
    return order


def _connected_subsets(adj: list[int], limit_size: int) -> list[int]:
    n = len(adj)
    seen: set[int] = set()
    frontier = [1 << i for i in range(n)]
    seen.update(frontier)
    while frontier:
        nxt = []
        for s in frontier:
            if _popcount(s) >= limit_size:
                continue
            nb = 0
            x = s
            while x:
                low = x & -x
                nb |= adj[low.bit_length() - 1]
                x ^= low
            nb &= ~s
            while nb:
                low = nb & -nb
                nb ^= low
                t = s | low
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(seen, key=lambda s: (_popcount(s), s))


def is_minor(
    h: Graph,
    g: Graph,
    *,
    max_pattern: int = MAX_PATTERN,
    max_host: int | None = MAX_MINOR_HOST,
    force: bool = False,
) -> MinorModel | None:
    """Return a minor model of ``h`` in ``g``, or ``None`` if there is none."""
    _guard(h, g, max_pattern, max_host, force)
    if len(h.vertices) > len(g.vertices) or len(h.edges) > len(g.edges):
        return None
    if not h.vertices:
        return MinorModel({})

    hosts = sorted(g.vertices)
    index = {v: i for i, v in enumerate(hosts)}
    adj = [0] * len(hosts)
    for u, v in g.edges:
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]

    order = _pattern_order(h)
    pos = {p: i for i, p in enumerate(order)}
    earlier = [[pos[q] for q in h.adjacency[p] if pos[q] < i] for i, p in enumerate(order)]
    t = len(order)
    n = len(hosts)
    symmetric = _is_complete(h)
    subsets = _connected_subsets(adj, n - t + 1)
    nbr_of = {}
    for s in subsets:
        nb = 0
        x = s
        while x:
            low = x & -x
            nb |= adj[low.bit_length() - 1]
            x ^= low
        nbr_of[s] = nb

    assign = [0] * t

    def rec(i: int, used: int, free: int) -> bool:
        if i == t:
            return True
        budget = free - (t - i - 1)
        lowest_prev = (assign[i - 1] & -assign[i - 1]) if (symmetric and i) else 0
        for s in subsets:
            if s & used:
                continue
            size = _popcount(s)
            if size > budget:
                break
            if symmetric and (s & -s) <= lowest_prev:
                continue
            if any(not (nbr_of[assign[j]] & s) for j in earlier[i]):
                continue
            assign[i] = s
            if rec(i + 1, used | s, free - size):
                return True
        return False

    if not rec(0, 0, n):
        return None
    branch = {}
    for i, p in enumerate(order):
        branch[p] = frozenset(hosts[b] for b in range(n) if assign[i] >> b & 1)
    return MinorModel(branch)


def is_topological_subgraph(
    h: Graph,
    g: Graph,
    *,
    max_pattern: int = MAX_PATTERN,
    force: bool = False,
) -> TopEmbedding | None:
    """Return an embedding of a subdivision of ``h`` into ``g``, or ``None``."""
    _guard(h, g, max_pattern, None, force)
    if len(h.vertices) > len(g.vertices) or len(h.edges) > len(g.edges):
        return None
    if not h.vertices:
        return TopEmbedding({}, {})

    hosts = sorted(g.vertices)
    index = {v: i for i, v in enumerate(hosts)}
    n = len(hosts)
    adj = [0] * n
    for u, v in g.edges:
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    deg = [_popcount(a) for a in adj]

    order = sorted(h.vertices, key=lambda p: (-h.degree(p), p))
    pos = {p: i for i, p in enumerate(order)}
    hdeg = [h.degree(p) for p in order]
    hadj = [{pos[q] for q in h.adjacency[p]} for p in order]
    pattern_edges = sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in h.edges)
    symmetric = _is_complete(h)
    t = len(order)
    image = [-1] * t
    found_paths: dict[tuple[int, int], list[int]] = {}

    def reachable(src: int, dst: int, allowed: int) -> bool:
        seen = 1 << src
        stack = [src]
        while stack:
            x = stack.pop()
            nb = adj[x]
            if nb >> dst & 1:
                return True
            nb &= allowed & ~seen
            while nb:
                low = nb & -nb
                nb ^= low
                seen |= low
                stack.append(low.bit_length() - 1)
        return False

    def route(todo: list[tuple[int, int]], blocked: int) -> bool:
        if not todo:
            return True
        allowed = ((1 << n) - 1) & ~blocked
        for a, b in todo:
            if not reachable(image[a], image[b], allowed):
                return False
        (a, b), rest = todo[0], todo[1:]
        src, dst = image[a], image[b]
        path = [src]

        def dfs(x: int, inner: int) -> bool:
            nb = adj[x]
            if nb >> dst & 1 and len(path) > 1:
                found_paths[(a, b)] = path + [dst]
                if route(rest, blocked | inner):
                    return True
            nb &= allowed & ~inner
            while nb:
                low = nb & -nb
                nb ^= low
                y = low.bit_length() - 1
                path.append(y)
                if dfs(y, inner | low):
                    return True
                path.pop()
            return False

        return dfs(src, 0)

    def place(i: int, used: int) -> bool:
        if i == t:
            direct = []
            todo = []
            for a, b in pattern_edges:
                if adj[image[a]] >> image[b] & 1:
                    direct.append((a, b))
                else:
                    todo.append((a, b))
            for a in range(t):
                x = image[a]
                ok = 0
                nb = adj[x]
                while nb:
                    low = nb & -nb
                    nb ^= low
                    y = low.bit_length() - 1
                    if not (used >> y & 1) or any(image[q] == y for q in hadj[a]):
                        ok += 1
                if ok < hdeg[a]:
                    return False
            for a, b in direct:
                found_paths[(a, b)] = [image[a], image[b]]
            return route(todo, used)
        start = image[i - 1] + 1 if (symmetric and i) else 0
        for x in range(start, n):
            if used >> x & 1 or deg[x] < hdeg[i]:
                continue
            image[i] = x
            if place(i + 1, used | (1 << x)):
                return True
        image[i] = -1
        return False

    if not place(0, 0):
        return None
    branch = {p: hosts[image[pos[p]]] for p in order}
    paths = {}
    for (a, b), idx_path in found_paths.items():
        pa, pb = order[a], order[b]
        host_path = tuple(hosts[x] for x in idx_path)
        if pa > pb:
            pa, pb = pb, pa
            host_path = host_path[::-1]
        paths[(pa, pb)] = host_path
    return TopEmbedding(branch, paths)


# -- independent checkers ----------------------------------------------------


def check_minor_model(h: Graph, g: Graph, model: MinorModel) -> list[str]:
    """Return the list of violated minor-model conditions (empty if valid)."""
    problems = []
    sets = model.branch_sets
    if set(sets) != set(h.vertices):
        problems.append("branch sets do not match the pattern vertices")
        return problems
    seen: set[int] = set()
    for p, s in sets.items():
        if not s:
            problems.append(f"branch set of {p} is empty")
            continue
        if not s <= g.vertices:
            problems.append(f"branch set of {p} leaves the host")
            continue
        if seen & s:
            problems.append(f"branch set of {p} overlaps another")
        seen |= s
        start = min(s)
        reach = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in g.adjacency[x]:
                if y in s and y not in reach:
                    reach.add(y)
                    stack.append(y)
        if reach != s:
            problems.append(f"branch set of {p} is disconnected")
    if problems:
        return problems
    for a, b in h.edges:
        if not any(g.has_edge(x, y) for x in sets[a] for y in sets[b]):
            problems.append(f"no host edge between branch sets of {a} and {b}")
    return problems


def check_top_embedding(h: Graph, g: Graph, emb: TopEmbedding) -> list[str]:
    """Return the list of violated embedding conditions (empty if valid)."""
    problems = []
    iota = emb.branch_vertices
    if set(iota) != set(h.vertices):
        return ["branch vertex map does not cover the pattern"]
    if len(set(iota.values())) != len(iota):
        problems.append("branch vertex map is not injective")
    if not set(iota.values()) <= g.vertices:
        return problems + ["branch vertex outside the host"]
    branch_set = set(iota.values())
    expected = {norm_edge(a, b) for a, b in h.edges}
    if set(emb.paths) != expected:
        return problems + ["paths do not match the pattern edges"]
    inner_used: set[int] = set()
    for (a, b), path in emb.paths.items():
        if len(path) < 2 or path[0] != iota[a] or path[-1] != iota[b]:
            problems.append(f"path for {a}{b} has wrong endpoints")
            continue
        if len(set(path)) != len(path):
            problems.append(f"path for {a}{b} repeats a vertex")
        for x, y in zip(path, path[1:]):
            if not g.has_edge(x, y):
                problems.append(f"path for {a}{b} uses non-edge {x}-{y}")
        inner = set(path[1:-1])
        if inner & branch_set:
            problems.append(f"path for {a}{b} passes through a branch vertex")
        if inner & inner_used:
            problems.append(f"path for {a}{b} shares an inner vertex")
        inner_used |= inner
    return problems
