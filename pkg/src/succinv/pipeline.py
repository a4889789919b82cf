"""End-to-end model checking for successor-invariant formulas.

Gaifman graph -> tree decomposition -> rooted, pruned, normalised,
torso-explicit decomposition -> classification for ``c`` -> one k-walk
through an edge-augmented supergraph -> walk-step relation added to the
structure -> successor strategy -> verdict.
"""

from __future__ import annotations

import time
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

from succinv.errors import InputError
from succinv.evaluate import evaluate
from succinv.formula import Formula, check_vocabulary
from succinv.graph import Edge, Graph
from succinv.kwalk import ConnectionResult, Walk, connect_walks
from succinv.structure import SUCC, Structure, Vocabulary, gaifman_graph
from succinv.successor import SEMANTIC, STRATEGIES, apply_strategy
from succinv.treedecomp import (
    HEURISTICS,
    MAX_MINOR_HOST,
    BagClassification,
    RootedDecomposition,
    TreeDecomposition,
    classify_bags,
    heuristic_decompose,
    make_torsos_explicit,
    normalize_empty_adhesions,
    prune_redundant_bags,
    read_td,
    root_decomposition,
)

WALK_EDGE = "WalkEdge"


def decomposition_for(g: Graph, source: str) -> TreeDecomposition:
    """Resolve ``file=PATH``, ``heuristic=NAME`` or ``single-bag`` against host ``g``."""
    if source == "single-bag":
        return heuristic_decompose(g, "single-bag")
    kind, sep, value = source.partition("=")
    if sep and kind == "file":
        return read_td(Path(value), g)
    if sep and kind == "heuristic":
        if value not in HEURISTICS:
            raise InputError(f"unknown heuristic {value!r}; choose from {', '.join(HEURISTICS)}")
        return heuristic_decompose(g, value)
    raise InputError(f"decomposition source must be file=PATH, heuristic=NAME or single-bag, got {source!r}")


def prepare_decomposition(td: TreeDecomposition, root: int | None = None) -> tuple[RootedDecomposition, list[Edge]]:
    """Root, prune, normalise and make torsos explicit; returns the added torso edges."""
    rd = root_decomposition(td, root)
    rd = prune_redundant_bags(rd)
    rd = normalize_empty_adhesions(rd)
    _, rd, added = make_torsos_explicit(rd)
    return rd, added


@dataclass(frozen=True)
class WalkBuild:
    """A prepared decomposition, its classification, and the connected walk."""

    rooted: RootedDecomposition
    classification: BagClassification
    torso_edges: tuple[Edge, ...]
    connection: ConnectionResult

    @property
    def edge_log(self) -> list[tuple[int, int, str]]:
        return [(u, v, "torso") for u, v in self.torso_edges] + list(self.connection.edge_log)

    @property
    def edges_added(self) -> int:
        return len(self.torso_edges) + len(self.connection.edge_log)


def build_walk(td: TreeDecomposition, c: int, *, max_minor_host: int | None = MAX_MINOR_HOST) -> WalkBuild:
    rd, torso_edges = prepare_decomposition(td)
    classification = classify_bags(rd, c, max_minor_host=max_minor_host)
    connection = connect_walks(rd, classification, c)
    return WalkBuild(rd, classification, tuple(torso_edges), connection)


def add_walk_edges(a: Structure, w: Walk, symbol: str = WALK_EDGE) -> Structure:
    """Expand ``a`` by the relation of consecutive walk steps."""
    return a.expand(Vocabulary(((symbol, 2),)), {symbol: frozenset(w.steps())})


@dataclass(frozen=True)
class McReport:
    verdict: bool
    build: WalkBuild | None
    strategy: str
    timings: Mapping[str, float] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.build.connection.k if self.build else 0

    @property
    def M(self) -> int:
        return self.build.connection.M if self.build else 0

    @property
    def d(self) -> int:
        return self.build.connection.d if self.build else 0

    @property
    def k_prime(self) -> int:
        return self.build.connection.k_prime if self.build else 0

    @property
    def realized(self) -> int:
        return self.build.connection.certificate.realized if self.build else 0

    @property
    def edges_added(self) -> int:
        return self.build.edges_added if self.build else 0

    def summary(self) -> str:
        word = "holds" if self.verdict else "fails"
        return f"RESULT {word} k'={self.k_prime} M={self.M} edges_added={self.edges_added}"


def model_check(
    a: Structure,
    phi: Formula,
    c: int,
    *,
    td: TreeDecomposition | None = None,
    source: str = "heuristic=min-fill",
    strategy: str = SEMANTIC,
    max_minor_host: int | None = MAX_MINOR_HOST,
    assignment: Mapping[str, int] | None = None,
) -> McReport:
    """Decide ``a |= phi`` for successor-invariant ``phi`` through the k-walk construction.

    The decomposition is ``td`` if given, else resolved from ``source``.
    """
    if strategy not in STRATEGIES:
        raise InputError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
    if c < 1:
        raise InputError("c must be >= 1")
    check_vocabulary(phi, a.vocabulary)
    if WALK_EDGE in a.vocabulary:
        raise InputError(f"structure already uses the symbol {WALK_EDGE}")
    timings: dict[str, float] = {}
    clock = time.perf_counter()
    if not a.universe:
        b = a.expand(Vocabulary(((SUCC, 2),)), {SUCC: frozenset()})
        return McReport(evaluate(b, phi, assignment), None, strategy)
    g = gaifman_graph(a)
    if td is None:
        td = decomposition_for(g, source)
    elif td.host != g:
        td = td.with_host(g)
    timings["decompose"] = time.perf_counter() - clock

    clock = time.perf_counter()
    build = build_walk(td, c, max_minor_host=max_minor_host)
    timings["walk"] = time.perf_counter() - clock

    clock = time.perf_counter()
    annotated = add_walk_edges(a, build.connection.walk)
    verdict = apply_strategy(annotated, build.connection.walk, phi, strategy, assignment)
    timings["evaluate"] = time.perf_counter() - clock
    return McReport(verdict, build, strategy, timings)
