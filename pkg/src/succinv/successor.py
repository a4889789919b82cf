"""Successor relations read off a k-walk, and the annotated-expansion route.

Two ways to answer a successor-invariant query on a structure with a walk:

* ``semantic``: interpret ``succ`` by the order of first visits and
  evaluate directly. Correct for every successor-invariant formula.
* ``syntactic``: expand the structure by occurrence and step relations of
  the walk (its Gaifman graph does not change) and replace ``succ`` by a
  formula over them. Only ``k = 1`` is implemented.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from succinv.errors import InputError, InvariantViolation, UnsupportedError
from succinv.evaluate import evaluate, satisfying_pairs, substitute_atom
from succinv.formula import And, Atom, Eq, Forall, Formula, Or
from succinv.invariance import check_successor_relation, successor_from_cycle
from succinv.kwalk import Walk
from succinv.structure import SUCC, Structure, Vocabulary, gaifman_graph

SEMANTIC = "semantic"
SYNTACTIC = "syntactic"
STRATEGIES = (SEMANTIC, SYNTACTIC)


def occ_symbol(r: int) -> str:
    return f"Occ_{r}"


def step_symbol(i: int, j: int) -> str:
    return f"Step_{i}_{j}"


def annotation_vocabulary(k: int) -> Vocabulary:
    """``Occ_1..Occ_k`` (unary) and ``Step_i_j`` for ``i, j`` in ``1..k`` (binary)."""
    if k < 1:
        raise InputError("k must be >= 1")
    symbols = [(occ_symbol(r), 1) for r in range(1, k + 1)]
    symbols += [(step_symbol(i, j), 2) for i in range(1, k + 1) for j in range(1, k + 1)]
    return Vocabulary(tuple(symbols))


def first_visit_successor(universe: Iterable[int], w: Walk) -> frozenset[tuple[int, int]]:
    """Cyclic successor following the order in which ``w`` first reaches each element."""
    universe = set(universe)
    seq = w.sequence if isinstance(w, Walk) else tuple(w)
    order = list(dict.fromkeys(x for x in seq if x in universe))
    uncovered = universe - set(order)
    if uncovered:
        raise InputError(f"walk does not visit {sorted(uncovered)}")
    strays = set(seq) - universe
    if strays:
        raise InputError(f"walk visits {sorted(strays)}, which lie outside the universe")
    return successor_from_cycle(order)


def occurrence_steps(w: Walk) -> list[tuple[int, int, int, int]]:
    """Each walk step as ``(x, i, y, j)``: from the ``i``-th visit of ``x`` to the ``j``-th of ``y``."""
    seen: Counter[int] = Counter()
    occ = []
    for x in w.sequence:
        seen[x] += 1
        occ.append(seen[x])
    n = len(w.sequence)
    if n == 1:
        return []
    return [(w.sequence[p], occ[p], w.sequence[(p + 1) % n], occ[(p + 1) % n]) for p in range(n)]


@dataclass(frozen=True)
class AnnotatedExpansion:
    base: Structure
    extra_vocabulary: Vocabulary
    extra_relations: Mapping[str, frozenset[tuple[int, ...]]]

    @property
    def structure(self) -> Structure:
        return self.base.expand(self.extra_vocabulary, self.extra_relations)

    @property
    def k(self) -> int:
        return sum(1 for _, arity in self.extra_vocabulary.symbols if arity == 1)


def build_annotated_expansion(a: Structure, w: Walk, k: int) -> AnnotatedExpansion:
    """Record each element's visit count (``Occ_r``) and each walk step by occurrence (``Step_i_j``).

    Every step must already be an edge of the Gaifman graph of ``a``, so the
    expansion has the same Gaifman graph.
    """
    counts = w.counts()
    if set(counts) != set(a.universe):
        raise InputError("walk must visit exactly the universe")
    mult = max(counts.values())
    if k < mult:
        raise InputError(f"walk visits an element {mult} times, more than k={k}")
    vocab = annotation_vocabulary(k)
    rel: dict[str, set[tuple[int, ...]]] = {name: set() for name in vocab.names()}
    for x, r in counts.items():
        rel[occ_symbol(r)].add((x,))
    base_gaifman = gaifman_graph(a)
    out_degree: Counter[tuple[int, int]] = Counter()
    for x, i, y, j in occurrence_steps(w):
        if x != y and not base_gaifman.has_edge(x, y):
            raise InputError(f"walk step {x}->{y} is not an edge of the Gaifman graph")
        if x == y:
            raise InputError(f"walk repeats {x} in consecutive positions")
        rel[step_symbol(i, j)].add((x, y))
        out_degree[(x, i)] += 1
    if len(w) > 1:
        for x, r in counts.items():
            for i in range(1, r + 1):
                if out_degree[(x, i)] != 1:
                    raise InvariantViolation("one step per occurrence", f"element {x}, occurrence {i}")
    expansion = AnnotatedExpansion(a, vocab, {name: frozenset(v) for name, v in rel.items()})
    if gaifman_graph(expansion.structure) != base_gaifman:
        raise InvariantViolation("expansion keeps the Gaifman graph")
    return expansion


def build_phi_succ(k: int) -> Formula:
    """Formula in ``x, y`` defining a successor relation on annotated expansions.

    For ``k = 1`` the walk is a Hamiltonian cycle and its steps are the
    successor; a one-element universe gets the loop.
    """
    if k == 1:
        lone = And(Eq("x", "y"), Forall("z", Eq("z", "x")))
        return Or(Atom(step_symbol(1, 1), ("x", "y")), lone)
    raise UnsupportedError(f"the syntactic successor definition is only implemented for k=1, not k={k}")


def apply_strategy(
    a: Structure,
    w: Walk,
    phi: Formula,
    strategy: str = SEMANTIC,
    assignment: Mapping[str, int] | None = None,
) -> bool:
    """Decide ``a |= phi`` for successor-invariant ``phi`` using the walk ``w``."""
    if strategy == SEMANTIC:
        succ = first_visit_successor(a.universe, w)
        b = a.expand(Vocabulary(((SUCC, 2),)), {SUCC: succ})
        return evaluate(b, phi, assignment)
    if strategy == SYNTACTIC:
        k = w.multiplicity()
        definition = build_phi_succ(k)
        expansion = build_annotated_expansion(a, w, k)
        return evaluate(expansion.structure, substitute_atom(phi, SUCC, definition), assignment)
    raise InputError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")


def defined_successor(expansion: AnnotatedExpansion) -> frozenset[tuple[int, int]]:
    """Pairs satisfying the successor formula on ``expansion``; checked to form a successor relation."""
    s = expansion.structure
    pairs = satisfying_pairs(s, build_phi_succ(expansion.k))
    if not check_successor_relation(s.universe, pairs):
        raise InvariantViolation("defined relation is a successor relation", str(sorted(pairs)))
    return pairs
