"""Successor relations, linear orders, and invariance checking.

A successor relation is the graph of a cyclic permutation of the universe
(the wrap-around pair is included). Invariance checks enumerate every
successor relation (or linear order) on a small structure and compare
truth values.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from itertools import permutations
from math import factorial

from succinv.errors import CapabilityError, InputError
from succinv.evaluate import evaluate
from succinv.formula import Formula
from succinv.structure import LEQ, SUCC, Structure, Vocabulary

Pairs = frozenset[tuple[int, int]]

MAX_SUCC_EXHAUSTIVE = 8
MAX_ORDER_EXHAUSTIVE = 6


def check_successor_relation(universe: Iterable[int], pairs: Iterable[tuple[int, int]]) -> bool:
    """True iff ``pairs`` is the graph of one cyclic permutation of ``universe``."""
    universe = set(universe)
    pairs = set(pairs)
    if not universe:
        return not pairs
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    for x, y in pairs:
        if x not in universe or y not in universe or x in succ or y in pred:
            return False
        succ[x] = y
        pred[y] = x
    if len(succ) != len(universe):
        return False
    start = min(universe)
    x = succ[start]
    steps = 1
    while x != start:
        x = succ[x]
        steps += 1
    return steps == len(universe)


def successor_from_cycle(cycle: Sequence[int]) -> Pairs:
    n = len(cycle)
    return frozenset((cycle[i], cycle[(i + 1) % n]) for i in range(n))


def order_from_sequence(seq: Sequence[int]) -> Pairs:
    """The (reflexive) linear order listing ``seq`` from least to greatest."""
    return frozenset((seq[i], seq[j]) for i in range(len(seq)) for j in range(i, len(seq)))


def is_linear_order(universe: Iterable[int], pairs: Iterable[tuple[int, int]]) -> bool:
    universe = sorted(set(universe))
    rel = set(pairs)
    if any(x not in universe or y not in universe for x, y in rel):
        return False
    for x in universe:
        if (x, x) not in rel:
            return False
        for y in universe:
            if x != y and ((x, y) in rel) == ((y, x) in rel):
                return False
            if (x, y) in rel:
                for z in universe:
                    if (y, z) in rel and (x, z) not in rel:
                        return False
    return True


def all_successor_cycles(universe: Iterable[int]) -> Iterator[tuple[int, ...]]:
    """Every cyclic order, as a sequence starting at the least element, in lex order."""
    elems = sorted(universe)
    if not elems:
        return
    first, rest = elems[0], elems[1:]
    for perm in permutations(rest):
        yield (first,) + perm


def all_linear_orders(universe: Iterable[int]) -> Iterator[tuple[int, ...]]:
    yield from permutations(sorted(universe))


@dataclass(frozen=True)
class InvarianceVerdict:
    """Outcome of an invariance check.

    ``witness`` holds two arrangements (cyclic sequences for successors,
    least-to-greatest sequences for orders) on which ``phi`` gets different
    truth values ``values``.
    """

    invariant: bool
    exhaustive: bool
    checked: int
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    values: tuple[bool, bool] | None = None
    seed: int | None = None

    @property
    def status(self) -> str:
        if not self.invariant:
            return "not-invariant"
        return "invariant" if self.exhaustive else "no-violation-found"


def _check(
    a: Structure,
    phi: Formula,
    symbol: str,
    to_relation,
    arrangements: Iterable[tuple[int, ...]],
    exhaustive: bool,
    seed: int | None,
    assignment: Mapping[str, int] | None,
) -> InvarianceVerdict:
    if symbol in a.vocabulary:
        raise InputError(f"structure already interprets the reserved symbol {symbol}")
    extra = Vocabulary(((symbol, 2),))
    reference: tuple[tuple[int, ...], bool] | None = None
    checked = 0
    for arr in arrangements:
        b = a.expand(extra, {symbol: to_relation(arr)})
        value = evaluate(b, phi, assignment)
        checked += 1
        if reference is None:
            reference = (arr, value)
        elif value != reference[1]:
            return InvarianceVerdict(False, exhaustive, checked, (reference[0], arr), (reference[1], value), seed)
    return InvarianceVerdict(True, exhaustive, checked, seed=seed)


def check_successor_invariance(
    a: Structure,
    phi: Formula,
    *,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = 200,
    max_exhaustive: int = MAX_SUCC_EXHAUSTIVE,
    assignment: Mapping[str, int] | None = None,
) -> InvarianceVerdict:
    """Compare ``phi`` under successor relations on ``a``.

    ``mode="exhaustive"`` tries all ``(n-1)!`` cyclic orders (needs
    ``n <= max_exhaustive``); ``mode="sampled"`` tries the ascending cycle
    plus ``samples`` seeded random ones.
    """
    n = len(a.universe)
    if mode == "exhaustive":
        if n > max_exhaustive:
            raise CapabilityError(f"exhaustive successor check needs |universe| <= {max_exhaustive}, got {n}")
        return _check(a, phi, SUCC, successor_from_cycle, all_successor_cycles(a.universe), True, None, assignment)
    if mode == "sampled":
        return _check(a, phi, SUCC, successor_from_cycle, _sampled(a.universe, samples, seed, cyclic=True),
                      False, seed, assignment)
    raise InputError(f"unknown mode {mode!r}")


def check_order_invariance(
    a: Structure,
    phi: Formula,
    *,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = 200,
    max_exhaustive: int = MAX_ORDER_EXHAUSTIVE,
    assignment: Mapping[str, int] | None = None,
) -> InvarianceVerdict:
    """Like :func:`check_successor_invariance`, over all ``n!`` linear orders bound to ``leq``."""
    n = len(a.universe)
    if mode == "exhaustive":
        if n > max_exhaustive:
            raise CapabilityError(f"exhaustive order check needs |universe| <= {max_exhaustive}, got {n}")
        return _check(a, phi, LEQ, order_from_sequence, all_linear_orders(a.universe), True, None, assignment)
    if mode == "sampled":
        return _check(a, phi, LEQ, order_from_sequence, _sampled(a.universe, samples, seed, cyclic=False),
                      False, seed, assignment)
    raise InputError(f"unknown mode {mode!r}")


def _sampled(universe: Iterable[int], samples: int, seed: int, cyclic: bool) -> Iterator[tuple[int, ...]]:
    elems = sorted(universe)
    yield tuple(elems)
    rng = random.Random(seed)
    for _ in range(samples):
        if cyclic and elems:
            rest = elems[1:]
            rng.shuffle(rest)
            yield (elems[0], *rest)
        else:
            perm = list(elems)
            rng.shuffle(perm)
            yield tuple(perm)


def count_arrangements(n: int, cyclic: bool) -> int:
    if n == 0:
        return 0
    return factorial(n - 1) if cyclic else factorial(n)
