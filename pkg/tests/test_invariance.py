from __future__ import annotations

from itertools import product

import pytest

from succinv.errors import CapabilityError, InputError
from succinv.formula import parse_formula
from succinv.graph import path_graph
from succinv.invariance import (
    all_linear_orders,
    all_successor_cycles,
    check_order_invariance,
    check_successor_invariance,
    check_successor_relation,
    count_arrangements,
    is_linear_order,
    order_from_sequence,
    successor_from_cycle,
)
from succinv.structure import Structure, Vocabulary, structure_from_graph


def test_successor_relation_examples():
    assert check_successor_relation({1, 2, 3}, {(1, 2), (2, 3), (3, 1)})
    assert not check_successor_relation({1, 2, 3}, {(1, 2), (2, 1)})
    assert check_successor_relation({1}, {(1, 1)})
    assert not check_successor_relation({1, 2, 3, 4}, {(1, 2), (2, 1), (3, 4), (4, 3)})
    assert check_successor_relation(set(), set())


def _single_cycle(universe, pairs) -> bool:
    # independent check: pairs form a permutation whose cycle decomposition has one cycle
    succ = dict(pairs)
    if len(succ) != len(pairs) or set(succ) != set(universe) or set(succ.values()) != set(universe):
        return False
    seen, x = set(), min(universe)
    while x not in seen:
        seen.add(x)
        x = succ[x]
    return seen == set(universe)


def test_successor_relation_against_cycle_decomposition():
    universe = [1, 2, 3, 4]
    pairs = list(product(universe, repeat=2))
    for targets in product(universe, repeat=4):
        rel = set(zip(universe, targets))
        assert check_successor_relation(universe, rel) == _single_cycle(universe, rel)
    # relations that are not functions
    assert not check_successor_relation(universe, set(pairs))


@pytest.mark.parametrize("n", range(1, 7))
def test_cycle_enumeration_counts(n):
    cycles = list(all_successor_cycles(range(1, n + 1)))
    assert len(cycles) == count_arrangements(n, cyclic=True)
    relations = {successor_from_cycle(c) for c in cycles}
    assert len(relations) == len(cycles)
    assert all(check_successor_relation(range(1, n + 1), r) for r in relations)
    assert len(list(all_linear_orders(range(1, n + 1)))) == count_arrangements(n, cyclic=False)


def test_linear_order_helpers():
    assert is_linear_order([1, 2, 3], order_from_sequence([2, 3, 1]))
    assert not is_linear_order([1, 2, 3], order_from_sequence([2, 3]))


def test_successor_invariance_examples():
    a = structure_from_graph(path_graph(4))
    total = parse_formula("forall x. exists y. succ(x,y)")
    v = check_successor_invariance(a, total)
    assert v.invariant and v.exhaustive and v.checked == 6 and v.status == "invariant"
    v = check_successor_invariance(a, parse_formula("exists x. exists y. E(x,y)"))
    assert v.invariant


def test_successor_invariance_witness():
    a = structure_from_graph(path_graph(3))
    a = Structure(Vocabulary((("E", 2),)), a.universe, {"E": {(1, 2)}})
    phi = parse_formula("exists x. exists y. (succ(x,y) & E(x,y))")
    v = check_successor_invariance(a, phi)
    assert not v.invariant and v.status == "not-invariant"
    first, second = v.witness
    assert first == (1, 2, 3) and second == (1, 3, 2)
    assert v.values == (True, False)


def test_sampled_mode_is_seeded():
    a = structure_from_graph(path_graph(10))
    phi = parse_formula("forall x. exists y. succ(x,y)")
    v1 = check_successor_invariance(a, phi, mode="sampled", seed=3, samples=20)
    assert v1.status == "no-violation-found" and v1.seed == 3 and v1.checked == 21
    with pytest.raises(CapabilityError):
        check_successor_invariance(a, phi)
    with pytest.raises(InputError):
        check_successor_invariance(a, phi, mode="bogus")


def test_sampled_witness_reproducible():
    a = Structure(Vocabulary((("E", 2),)), frozenset(range(1, 10)), {"E": {(1, 2)}})
    phi = parse_formula("exists x. exists y. (succ(x,y) & E(x,y))")
    v1 = check_successor_invariance(a, phi, mode="sampled", seed=7, samples=50)
    v2 = check_successor_invariance(a, phi, mode="sampled", seed=7, samples=50)
    assert not v1.invariant and v1 == v2


def test_order_invariance_examples():
    a = Structure(Vocabulary((("P", 1),)), frozenset({1, 2}), {"P": {(1,)}})
    assert check_order_invariance(a, parse_formula("exists x. P(x)")).invariant
    assert check_order_invariance(a, parse_formula("exists x. forall y. leq(x,y)")).invariant
    v = check_order_invariance(a, parse_formula("exists x. (P(x) & forall y. leq(x,y))"))
    assert not v.invariant and v.witness == ((1, 2), (2, 1))


def test_reserved_symbol_clash():
    a = Structure(Vocabulary((("succ", 2),)), frozenset({1}), {})
    with pytest.raises(InputError):
        check_successor_invariance(a, parse_formula("true"))


def test_order_guard():
    a = Structure(Vocabulary((("P", 1),)), frozenset(range(1, 8)), {})
    with pytest.raises(CapabilityError):
        check_order_invariance(a, parse_formula("true"))
