"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import random
from itertools import combinations, product

import networkx as nx

from succinv.formula import (
    And,
    Atom,
    Bottom,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Top,
)
from succinv.graph import Graph
from succinv.structure import Structure

# -- set-semantics evaluator --------------------------------------------------
# A formula denotes the set of assignments to its free variables (as tuples in
# sorted variable order) under which it holds.


def _extension(a: Structure, f: Formula) -> tuple[tuple[str, ...], set[tuple[int, ...]]]:
    uni = sorted(a.universe)
    if isinstance(f, Top):
        return (), {()}
    if isinstance(f, Bottom):
        return (), set()
    if isinstance(f, Atom):
        vs = tuple(sorted(set(f.args)))
        out = set()
        for tup in a.relations[f.name]:
            env: dict[str, int] = {}
            if all(env.setdefault(v, x) == x for v, x in zip(f.args, tup)):
                out.add(tuple(env[v] for v in vs))
        return vs, out
    if isinstance(f, Eq):
        if f.left == f.right:
            return (f.left,), {(x,) for x in uni}
        vs = tuple(sorted((f.left, f.right)))
        return vs, {(x, x) for x in uni}
    if isinstance(f, Not):
        vs, ext = _extension(a, f.body)
        return vs, set(product(uni, repeat=len(vs))) - ext
    if isinstance(f, Implies):
        return _extension(a, Or(Not(f.left), f.right))
    if isinstance(f, Iff):
        return _extension(a, Or(And(f.left, f.right), And(Not(f.left), Not(f.right))))
    if isinstance(f, (And, Or)):
        lv, le = _extension(a, f.left)
        rv, re_ = _extension(a, f.right)
        vs = tuple(sorted(set(lv) | set(rv)))
        out = set()
        for tup in product(uni, repeat=len(vs)):
            env = dict(zip(vs, tup))
            lt = tuple(env[v] for v in lv) in le
            rt = tuple(env[v] for v in rv) in re_
            if (lt and rt) if isinstance(f, And) else (lt or rt):
                out.add(tup)
        return vs, out
    if isinstance(f, Exists):
        vs, ext = _extension(a, f.body)
        if f.var not in vs:
            return vs, (ext if uni else set())
        i = vs.index(f.var)
        return vs[:i] + vs[i + 1 :], {t[:i] + t[i + 1 :] for t in ext}
    if isinstance(f, Forall):
        return _extension(a, Not(Exists(f.var, Not(f.body))))
    raise TypeError(f)


def reference_holds(a: Structure, f: Formula, env: dict[str, int] | None = None) -> bool:
    env = env or {}
    vs, ext = _extension(a, f)
    return tuple(env[v] for v in vs) in ext


# -- random generators ---------------------------------------------------------


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [(u, v) for u, v in combinations(range(1, n + 1), 2) if rng.random() < p]
    return Graph.from_edges(range(1, n + 1), edges)


def random_formula(
    rng: random.Random,
    symbols: dict[str, int],
    depth: int,
    bound: tuple[str, ...] = (),
    variables: tuple[str, ...] = ("x", "y", "z"),
) -> Formula:
    """A random formula whose free variables all lie in ``bound``."""
    if depth == 0 or (bound and rng.random() < 0.25):
        if not bound:
            return Top() if rng.random() < 0.5 else Bottom()
        if rng.random() < 0.2:
            return Eq(rng.choice(bound), rng.choice(bound))
        name = rng.choice(sorted(symbols))
        return Atom(name, tuple(rng.choice(bound) for _ in range(symbols[name])))
    r = rng.random()
    if r < 0.35 or not bound:
        var = rng.choice(variables)
        body = random_formula(rng, symbols, depth - 1, tuple(dict.fromkeys(bound + (var,))), variables)
        return Exists(var, body) if rng.random() < 0.5 else Forall(var, body)
    if r < 0.5:
        return Not(random_formula(rng, symbols, depth - 1, bound, variables))
    op = rng.choice((And, Or, Implies, Iff))
    return op(
        random_formula(rng, symbols, depth - 1, bound, variables),
        random_formula(rng, symbols, depth - 1, bound, variables),
    )


# -- containment oracles ------------------------------------------------------


def has_clique_minor(g: Graph, t: int) -> bool:
    """Try every labelling of vertices by branch set (0 = deleted)."""
    if t == 0:
        return True
    verts = sorted(g.vertices)
    if len(verts) < t:
        return False
    nxg = nx.Graph()
    nxg.add_nodes_from(verts)
    nxg.add_edges_from(g.edges)
    for labels in product(range(t + 1), repeat=len(verts)):
        if set(range(1, t + 1)) - set(labels):
            continue
        sets = [[v for v, lab in zip(verts, labels) if lab == i] for i in range(1, t + 1)]
        if not all(nx.is_connected(nxg.subgraph(s)) for s in sets):
            continue
        if all(
            any(g.has_edge(u, v) for u in sets[i] for v in sets[j])
            for i, j in combinations(range(t), 2)
        ):
            return True
    return False


# -- posets -----------------------------------------------------------------


def brute_max_antichain(elements, leq) -> int:
    """Largest pairwise incomparable subset; antichains are closed under subsets, so sizes are tried upwards."""
    elems = sorted(elements)
    best = 0
    for size in range(1, len(elems) + 1):
        if not any(
            all((x, y) not in leq and (y, x) not in leq for x, y in combinations(cand, 2))
            for cand in combinations(elems, size)
        ):
            break
        best = size
    return best


def random_poset_pairs(rng: random.Random, n: int, p: float) -> list[tuple[int, int]]:
    """Random strict order: a random linear arrangement, keep each forward pair with probability p."""
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
