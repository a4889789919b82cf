"""Closed k-walks through edge-augmented supergraphs.

Per-bag walks are enumeration cycles through ``bag(t) \\ alpha(t)``. They are
connected top-down along the decomposition tree: children whose attachment
cliques coincide are first merged into one closed walk, then every
(pseudo-)child is spliced into the current walk next to an attachment vertex
chosen by a min-degree peeling of the attachment cliques. Every vertex ends
up visited at most ``k + M + 1`` times.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

from succinv.errors import ClassificationError, FormatError, InputError, InvariantViolation
from succinv.graph import Edge, Graph, degeneracy_order, induced_subgraph, norm_edge
from succinv.treedecomp import (
    NEAR_BOUNDED_DEGREE,
    BagClassification,
    RootedDecomposition,
    TreeDecomposition,
    adhesion,
    validate,
)


@dataclass(frozen=True)
class Walk:
    """A closed walk; the last entry steps back to the first."""

    sequence: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.sequence:
            raise InputError("a walk needs at least one vertex")
        object.__setattr__(self, "sequence", tuple(self.sequence))

    def __len__(self) -> int:
        return len(self.sequence)

    def __iter__(self):
        return iter(self.sequence)

    def steps(self) -> list[tuple[int, int]]:
        """Consecutive pairs including the wrap-around; none for a single vertex."""
        seq = self.sequence
        if len(seq) == 1:
            return []
        return [(seq[i], seq[(i + 1) % len(seq)]) for i in range(len(seq))]

    def counts(self) -> Counter[int]:
        return Counter(self.sequence)

    def multiplicity(self) -> int:
        return max(self.counts().values())


@dataclass(frozen=True)
class KWalkCertificate:
    walk: Walk
    k: int
    visit_counts: Mapping[int, int]

    @property
    def realized(self) -> int:
        """Largest visit count actually used (may be below ``k``)."""
        return max(self.visit_counts.values(), default=0)


@dataclass(frozen=True)
class KWalkReport:
    """Outcome of :func:`validate_kwalk`; ``certificate`` is set iff ``ok``."""

    k: int
    missing: tuple[int, ...] = ()
    over_visited: tuple[tuple[int, int], ...] = ()
    bad_steps: tuple[tuple[int, int], ...] = ()
    foreign: tuple[int, ...] = ()
    certificate: KWalkCertificate | None = None

    @property
    def ok(self) -> bool:
        return self.certificate is not None

    def describe(self) -> str:
        if self.ok:
            return f"valid {self.k}-walk (max visits {self.certificate.realized})"
        parts = []
        if self.foreign:
            parts.append(f"vertices not in graph {list(self.foreign)}")
        if self.missing:
            parts.append(f"missing vertices {list(self.missing)}")
        if self.over_visited:
            parts.append("over-visited " + ", ".join(f"{v} ({n}x)" for v, n in self.over_visited))
        if self.bad_steps:
            parts.append("non-edge steps " + ", ".join(f"{u}-{v}" for u, v in self.bad_steps))
        return "; ".join(parts)


def validate_kwalk(g: Graph, w: Walk | Sequence[int], k: int) -> KWalkReport:
    """Check that ``w`` is a closed walk through ``g`` visiting every vertex 1..k times."""
    if not isinstance(w, Walk):
        w = Walk(tuple(w))
    counts = w.counts()
    foreign = tuple(sorted(v for v in counts if v not in g.vertices))
    missing = tuple(sorted(g.vertices - counts.keys()))
    over = tuple(sorted((v, n) for v, n in counts.items() if n > k))
    bad = tuple(dict.fromkeys((u, v) for u, v in w.steps() if not g.has_edge(u, v)))
    if foreign or missing or over or bad:
        return KWalkReport(k, missing, over, bad, foreign)
    return KWalkReport(k, certificate=KWalkCertificate(w, k, dict(counts)))


def _missing_edges(g: Graph, pairs: Iterable[tuple[int, int]]) -> list[Edge]:
    out: dict[Edge, None] = {}
    for u, v in pairs:
        if u != v and not g.has_edge(u, v):
            out[norm_edge(u, v)] = None
    return list(out)


def bag_walk(g: Graph, vertices: Iterable[int]) -> tuple[Walk, list[Edge]]:
    """Enumeration cycle through ``vertices`` in ascending order, plus the edges it needs."""
    vs = sorted(set(vertices))
    if not vs:
        raise InputError("bag_walk needs a nonempty vertex set")
    w = Walk(tuple(vs))
    return w, _missing_edges(g, w.steps())


@dataclass(frozen=True)
class MergeResult:
    """A merged closed walk and the edges ``(u_i, v_i)`` cut out of each input walk.

    The cross edges ``v_i u_(i+1)`` and ``v_m u_1`` together with the cut pairs
    form the cycle ``u_1 v_1 u_2 v_2 ... u_m v_m``.
    """

    walk: Walk
    added: list[Edge]
    cut_pairs: list[tuple[int, int]]


def merge_walks(g: Graph, walks: Sequence[Walk]) -> MergeResult:
    """Join vertex-disjoint closed walks into one, keeping every visit count.

    Each walk's first step ``u_i -> v_i`` is dropped and the remainder is
    traversed backwards from ``u_i`` to ``v_i``; consecutive pieces are joined
    by the edges ``v_i u_(i+1)``. A single-vertex walk takes part with
    ``u_i = v_i``.
    """
    if len(walks) < 2:
        raise InputError("merging needs at least two walks")
    pieces = []
    pairs = []
    for w in walks:
        seq = w.sequence
        if len(seq) == 1:
            pieces.append(list(seq))
            pairs.append((seq[0], seq[0]))
            continue
        u, v = seq[0], seq[1]
        rotated = list(seq[1:]) + [seq[0]]
        pieces.append(rotated[::-1])
        pairs.append((u, v))
    merged = [x for piece in pieces for x in piece]
    if len(set(merged)) != len(set().union(*(set(w.sequence) for w in walks))) or sum(
        len(set(w.sequence)) for w in walks
    ) != len(set(merged)):
        raise InputError("merged walks must be vertex-disjoint")
    cross = [(pairs[i][1], pairs[(i + 1) % len(pairs)][0]) for i in range(len(pairs))]
    return MergeResult(Walk(tuple(merged)), _missing_edges(g, cross), pairs)


def merge_duplicate_adhesions(g: Graph, child_walks: Sequence[Walk]) -> MergeResult:
    """Merge the walks of children that share one attachment clique.

    The caller adds each cut pair ``(u_i, v_i)`` to the parent bag, which
    grows every such child's adhesion by at most two.
    """
    return merge_walks(g, child_walks)


def attachment_bound(d: int, c: int) -> int:
    """How many cliques of size at most ``c + 2`` can share a vertex of degree at most ``d``."""
    return sum(comb(d, j) for j in range(c + 2))


@dataclass(frozen=True)
class AttachmentPlan:
    """``f[i]`` is the attachment vertex of clique ``i``; no vertex is used more than ``M`` times."""

    f: Mapping[int, int]
    M: int
    d: int
    conforming: bool = True
    notes: tuple[str, ...] = ()

    def load(self) -> Counter[int]:
        return Counter(self.f.values())


def select_attachments(
    cliques: Sequence[frozenset[int]],
    g: Graph,
    c: int,
    tag: str = NEAR_BOUNDED_DEGREE,
) -> AttachmentPlan:
    """Pick one vertex per clique by repeatedly taking a min-degree vertex of the union.

    ``d`` is ``c`` for near-bounded-degree bags and the degeneracy of the
    induced union otherwise. If a picked vertex has degree above ``d`` or a
    clique is larger than ``c + 2``, the plan uses the observed bounds and is
    flagged non-conforming.
    """
    cliques = [frozenset(C) for C in cliques]
    if any(not C for C in cliques):
        raise InputError("attachment cliques must be nonempty")
    if len(set(cliques)) != len(cliques):
        raise InputError("attachment cliques must be pairwise distinct")
    union = frozenset().union(*cliques) if cliques else frozenset()
    if tag == NEAR_BOUNDED_DEGREE:
        d = c
    else:
        d = degeneracy_order(induced_subgraph(g, union))[1]
    notes = []
    remaining = list(range(len(cliques)))
    f: dict[int, int] = {}
    worst = 0
    while remaining:
        live = frozenset().union(*(cliques[i] for i in remaining))
        sub = induced_subgraph(g, live)
        v = min(live, key=lambda x: (sub.degree(x), x))
        worst = max(worst, sub.degree(v))
        hit = [i for i in remaining if v in cliques[i]]
        for i in hit:
            f[i] = v
        remaining = [i for i in remaining if v not in cliques[i]]
    largest = max((len(C) for C in cliques), default=0)
    conforming = True
    d_used = d
    if worst > d:
        conforming = False
        d_used = worst
        notes.append(f"min-degree vertex of degree {worst} exceeds d={d}")
    width = c + 1
    if largest > c + 2:
        conforming = False
        width = largest - 1
        notes.append(f"clique of size {largest} exceeds c+2={c + 2}")
    M = sum(comb(d_used, j) for j in range(width + 1))
    plan = AttachmentPlan(f, M, d_used, conforming, tuple(notes))
    for i, C in enumerate(cliques):
        if f[i] not in C:
            raise InvariantViolation("attachment in clique", f"f({i})={f[i]} not in {sorted(C)}")
    over = [v for v, n in plan.load().items() if n > M]
    if over:
        raise InvariantViolation("attachment load", f"vertices {over} exceed M={M}")
    return plan


def splice_walk(current: Walk, v: int, child: Walk, u: int, g: Graph) -> tuple[Walk, list[Edge]]:
    """Insert ``child`` into ``current`` at the first visit of ``v``, entering and leaving via ``u``.

    The result reads ``... v, u, <child once around>, u, v, ...``; ``u`` and
    ``v`` each gain one visit (``v`` gains none if ``current`` is a single
    vertex, and ``u`` none if ``child`` is).
    """
    if u not in child.sequence:
        raise InputError(f"{u} does not occur in the child walk")
    if v not in current.sequence:
        raise InputError(f"{v} does not occur in the current walk")
    seq = current.sequence
    p = seq.index(v)
    c = child.sequence
    j = c.index(u)
    around = c[j:] + c[:j]
    inserted = list(around) + ([u] if len(c) > 1 else [])
    back = [v] if len(seq) > 1 else []
    out = list(seq[: p + 1]) + inserted + back + list(seq[p + 1 :])
    return Walk(tuple(out)), _missing_edges(g, [(v, u)])


@dataclass
class ConnectionState:
    """Bookkeeping of the top-down sweep.

    ``done`` is the set ``D`` of tree nodes whose bags the walk covers.
    """

    done: set[int]
    walk: Walk
    added_edges: list[tuple[int, int, str]] = field(default_factory=list)
    splices_at: Counter[int] = field(default_factory=Counter)

    def check(self, rd: RootedDecomposition) -> None:
        if rd.root not in self.done:
            raise InvariantViolation("D contains the root")
        for t in self.done:
            p = rd.parent[t]
            if p is not None and p not in self.done:
                raise InvariantViolation("D is connected", f"node {t} without its parent")
            if p is not None and not set(rd.children[p]) <= self.done:
                raise InvariantViolation("D is sibling-closed", f"node {t}")
        expected = set().union(*(rd.bag(t) for t in self.done))
        if set(self.walk.sequence) != expected:
            raise InvariantViolation(
                "walk covers the bags of D", f"differs on {sorted(expected ^ set(self.walk.sequence))}"
            )


@dataclass(frozen=True)
class ConnectionResult:
    """Output of :func:`connect_walks`.

    ``graph`` is the input host plus exactly the edges in ``edge_log``;
    ``decomposition`` is a valid decomposition of ``graph`` whose bags carry
    the merge vertices.
    """

    graph: Graph
    certificate: KWalkCertificate
    edge_log: tuple[tuple[int, int, str], ...]
    k: int
    M: int
    d: int
    decomposition: TreeDecomposition
    plans: Mapping[int, AttachmentPlan]
    max_frontier_visits: int
    merges: int

    @property
    def walk(self) -> Walk:
        return self.certificate.walk

    @property
    def k_prime(self) -> int:
        return self.certificate.k


def check_connectable(rd: RootedDecomposition) -> None:
    """Raise unless ``rd`` is pruned, normalised and torso-explicit."""
    for t in rd.order():
        p = rd.parent[t]
        if p is not None and not (rd.bag(t) - rd.alpha[t]):
            raise InputError(f"node {t} adds no vertex beyond its adhesion set; prune redundant bags first")
        a = sorted(rd.alpha[t])
        for i, x in enumerate(a):
            for y in a[i + 1 :]:
                if not rd.host.has_edge(x, y):
                    raise InputError(f"adhesion set of node {t} is not a clique; make torsos explicit first")
        if p is not None and rd.parent[p] is not None and rd.alpha[t] <= rd.alpha[p]:
            raise InputError(f"node {t} has an empty attachment clique; normalise adhesions first")


def connect_walks(rd: RootedDecomposition, classification: BagClassification, c: int) -> ConnectionResult:
    """Build one closed walk through ``rd.host`` plus added edges.

    ``rd`` must be pruned, normalised and torso-explicit (see
    :func:`check_connectable`) and ``classification`` conforming for ``c``.
    """
    if not classification.conforming:
        raise ClassificationError(
            f"decomposition does not conform for c={c}: {classification.describe()}",
            list(classification.failures),
        )
    check_connectable(rd)
    host = rd.host
    g = host
    log: list[tuple[int, int, str]] = []

    def add(edges: Iterable[Edge], reason: str) -> None:
        nonlocal g
        fresh = [e for e in edges if not g.has_edge(*e)]
        if fresh:
            g = g.with_edges(fresh)
            log.extend((u, v, reason) for u, v in fresh)

    walks: dict[int, Walk] = {}
    for t in rd.order():
        w, added = bag_walk(g, rd.bag(t) - rd.alpha[t])
        walks[t] = w
        add(added, "bag-cycle")
    k = max(w.multiplicity() for w in walks.values())

    state = ConnectionState({rd.root}, walks[rd.root])
    aug_bags = {t: set(rd.bag(t)) for t in rd.order()}
    plans: dict[int, AttachmentPlan] = {}
    M = 0
    d = 0
    frontier_max = 0
    merges = 0

    for t in rd.order():
        kids = rd.children[t]
        if not kids:
            continue
        counts = state.walk.counts()
        frontier = rd.bag(t) - rd.alpha[t]
        frontier_max = max([frontier_max] + [counts[x] for x in frontier])
        if any(counts[x] > k + 1 for x in frontier):
            raise InvariantViolation("frontier visit budget", f"node {t} has a vertex visited more than {k + 1} times")

        groups: dict[frozenset[int], list[int]] = {}
        for s in kids:
            groups.setdefault(rd.alpha[s] - rd.alpha[t], []).append(s)

        pseudo: list[tuple[frozenset[int], Walk]] = []
        for C, members in groups.items():
            if not C:
                if rd.parent[t] is not None:
                    raise InvariantViolation("nonempty attachment cliques", f"children {members} of node {t}")
                merged = merge_walks(g, [state.walk] + [walks[s] for s in members])
                add(merged.added, "merge")
                for u_i, v_i in merged.cut_pairs[1:]:
                    aug_bags[t].update((u_i, v_i))
                state.walk = merged.walk
                merges += 1
            elif len(members) > 1:
                merged = merge_duplicate_adhesions(g, [walks[s] for s in members])
                add(merged.added, "merge")
                for u_i, v_i in merged.cut_pairs:
                    aug_bags[t].update((u_i, v_i))
                pseudo.append((C, merged.walk))
                merges += 1
            else:
                pseudo.append((C, walks[members[0]]))

        if pseudo:
            plan = select_attachments([C for C, _ in pseudo], host, c, classification.tags[t])
            plans[t] = plan
            M = max(M, plan.M)
            d = max(d, plan.d)
            for i, (C, cw) in enumerate(pseudo):
                v = plan.f[i]
                inside = set(cw.sequence)
                nbrs = sorted(g.neighbours(v) & inside)
                u = nbrs[0] if nbrs else min(inside)
                before = state.walk.counts()[v]
                was_single = len(state.walk) == 1
                state.walk, added = splice_walk(state.walk, v, cw, u, g)
                add(added, "attach")
                gained = state.walk.counts()[v] - before
                if gained != (0 if was_single else 1):
                    raise InvariantViolation("splice visit ledger", f"vertex {v} gained {gained} visits")
                state.splices_at[v] += 1
                if state.splices_at[v] > M:
                    raise InvariantViolation("splice budget", f"vertex {v} spliced {state.splices_at[v]} times, M={M}")
        state.done.update(kids)
        state.check(rd)

    if state.done != set(rd.order()):
        raise InvariantViolation("sweep covers the tree")
    k_prime = k + M + 1
    report = validate_kwalk(g, state.walk, k_prime)
    if not report.ok:
        raise InvariantViolation("k-walk certificate", report.describe())
    final_td = TreeDecomposition(rd.base.tree, {t: frozenset(b) for t, b in aug_bags.items()}, g)
    td_report = validate(final_td)
    if not td_report.ok:
        raise InvariantViolation("augmented decomposition", td_report.describe())
    return ConnectionResult(
        graph=g,
        certificate=report.certificate,
        edge_log=tuple(log),
        k=k,
        M=M,
        d=d,
        decomposition=final_td,
        plans=plans,
        max_frontier_visits=frontier_max,
        merges=merges,
    )


def final_adhesion(result: ConnectionResult) -> int:
    return adhesion(result.decomposition)


# -- file formats ------------------------------------------------------------


def format_walk(w: Walk, k: int) -> str:
    return f"walk {k} {len(w)}\n" + " ".join(map(str, w.sequence)) + "\n"


def parse_walk(text: str) -> tuple[Walk, int]:
    toks = text.split()
    if len(toks) < 3 or toks[0] != "walk":
        raise FormatError("expected header 'walk <k> <length>'")
    try:
        k, length = int(toks[1]), int(toks[2])
        seq = tuple(int(x) for x in toks[3:])
    except ValueError:
        raise FormatError("walk file holds non-integer tokens") from None
    if len(seq) != length:
        raise FormatError(f"header announces {length} entries, found {len(seq)}")
    return Walk(seq), k


def read_walk(path: str | Path) -> tuple[Walk, int]:
    return parse_walk(Path(path).read_text(encoding="utf-8"))


def format_edge_log(log: Iterable[tuple[int, int] | tuple[int, int, str]]) -> str:
    return "".join(f"+ {e[0]} {e[1]}\n" for e in log)


def parse_edge_log(text: str) -> list[Edge]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 3 or toks[0] != "+":
            raise FormatError(f"expected '+ <u> <v>', got {line!r}", lineno)
        try:
            out.append(norm_edge(int(toks[1]), int(toks[2])))
        except ValueError:
            raise FormatError("edge endpoints must be integers", lineno) from None
    return out
