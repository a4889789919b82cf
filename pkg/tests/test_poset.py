from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_max_antichain, random_poset_pairs
from succinv.errors import FormatError, InputError
from succinv.evaluate import evaluate
from succinv.formula import parse_formula
from succinv.invariance import is_linear_order
from succinv.poset import (
    DEFAULT_COLOUR,
    PO,
    ChainCover,
    ColouredPoset,
    build_phi_leq,
    colour_symbol,
    defined_order,
    format_poset,
    is_antichain,
    maximum_antichain_size,
    parse_poset,
    poset_model_check,
    recolour,
    validate_poset,
    width_and_chain_cover,
    width_certificate,
)

# a=1, b=2, c=3, d=4 with a<c, a<d, b<d
WIDTH_TWO = ColouredPoset.from_relations(range(1, 5), [(1, 3), (1, 4), (2, 4)])


def random_poset(rng: random.Random, n: int, p: float, colours: int = 1) -> ColouredPoset:
    colouring = {x: str(rng.randrange(colours)) for x in range(1, n + 1)}
    return ColouredPoset.from_relations(range(1, n + 1), random_poset_pairs(rng, n, p), colouring, transitive=True)


@st.composite
def posets(draw, max_size: int = 9) -> ColouredPoset:
    n = draw(st.integers(1, max_size))
    perm = draw(st.permutations(range(1, n + 1)))
    pairs = [(perm[i], perm[j]) for i, j in combinations(range(n), 2) if draw(st.booleans())]
    return ColouredPoset.from_relations(range(1, n + 1), pairs, transitive=True)


# -- validation ---------------------------------------------------------------


def test_validate_examples():
    assert validate_poset(ColouredPoset.from_relations(range(1, 4), [(1, 2), (2, 3)], transitive=True)).ok
    anti = validate_poset(ColouredPoset.from_relations(range(1, 3), [(1, 2), (2, 1)]))
    assert anti.not_antisymmetric == ((1, 2),)
    trans = validate_poset(ColouredPoset.from_relations(range(1, 4), [(1, 2), (2, 3)]))
    assert trans.not_transitive == ((1, 2, 3),)
    assert "transitivity" in trans.describe()
    refl = validate_poset(ColouredPoset(frozenset({1, 2}), frozenset({(1, 1)})))
    assert refl.not_reflexive == (2,)


def test_order_pairs_must_stay_inside():
    with pytest.raises(InputError):
        ColouredPoset(frozenset({1}), frozenset({(1, 2)}))


def test_default_colour_and_structure():
    p = ColouredPoset.from_relations({1, 2}, [(1, 2)], {1: "red"})
    assert p.colouring == {1: "red", 2: DEFAULT_COLOUR}
    s = p.to_structure()
    assert s.relations[PO] == {(1, 1), (2, 2), (1, 2)}
    assert s.relations["Colour_red"] == {(1,)}
    assert colour_symbol(("red", 2)) == "Col_red_2"


# -- width -------------------------------------------------------------------


def test_width_examples():
    width, cover = width_and_chain_cover(ColouredPoset.from_relations(range(1, 5), []))
    assert width == 4 and cover.chains == ((1,), (2,), (3,), (4,))
    chain = ColouredPoset.from_relations(range(1, 6), [(i, i + 1) for i in range(1, 5)], transitive=True)
    assert width_and_chain_cover(chain) == (1, ChainCover(((1, 2, 3, 4, 5),)))
    cert = width_certificate(WIDTH_TWO)
    assert cert.width == 2
    assert cert.cover.chains == ((1, 3), (2, 4))
    assert cert.antichain == (3, 4)
    assert maximum_antichain_size(WIDTH_TWO) == 2


def test_width_rejects_invalid_poset():
    with pytest.raises(InputError):
        width_and_chain_cover(ColouredPoset.from_relations(range(1, 4), [(1, 2), (2, 3)]))


@given(posets())
def test_cover_is_valid_and_tight(p):
    cert = width_certificate(p)
    assert cert.cover.problems(p) == []
    assert is_antichain(p, cert.antichain)
    assert len(cert.antichain) == cert.width == brute_max_antichain(p.elements, {pr for pr in p.leq if pr[0] != pr[1]})


def test_antichain_oracle_limit():
    big = ColouredPoset.from_relations(range(1, 17), [])
    with pytest.raises(InputError):
        maximum_antichain_size(big)


def test_permuted_cover():
    cover = ChainCover(((1, 3), (2, 4)))
    assert cover.permuted([1, 0]).chains == ((2, 4), (1, 3))
    with pytest.raises(InputError):
        cover.permuted([0, 0])


# -- recolouring and the order formula -----------------------------------------


def test_recolour_examples():
    _, cover = width_and_chain_cover(WIDTH_TWO)
    q = recolour(WIDTH_TWO, cover)
    assert q.colouring == {1: ("0", 1), 3: ("0", 1), 2: ("0", 2), 4: ("0", 2)}
    assert q.leq == WIDTH_TWO.leq
    chain = ColouredPoset.from_relations(range(1, 4), [(1, 2), (2, 3)], transitive=True)
    assert {j for _, j in recolour(chain, width_and_chain_cover(chain)[1]).colouring.values()} == {1}
    with pytest.raises(InputError):
        recolour(WIDTH_TWO, ChainCover(((1, 3),)))


def test_defined_order_on_width_two_example():
    _, cover = width_and_chain_cover(WIDTH_TWO)
    order = defined_order(WIDTH_TWO, cover)
    assert is_linear_order(WIDTH_TWO.elements, order)
    # 1 < 3 < 2 < 4
    rank = {x: sum(1 for y in WIDTH_TWO.elements if (y, x) in order) for x in WIDTH_TWO.elements}
    assert sorted(WIDTH_TWO.elements, key=rank.get) == [1, 3, 2, 4]


def test_single_chain_order_is_the_poset_order():
    chain = ColouredPoset.from_relations(range(1, 5), [(3, 1), (1, 4), (4, 2)], transitive=True)
    _, cover = width_and_chain_cover(chain)
    assert defined_order(chain, cover) == chain.leq


def test_phi_leq_shape():
    phi = build_phi_leq(["0"], 1)
    # no earlier chain exists, so the first disjunct is false
    assert "Col_0_1" in repr(phi) and PO in repr(phi)


@given(posets(8), st.randoms(use_true_random=False))
def test_defined_order_is_linear_and_extends_chains(p, rnd):
    _, cover = width_and_chain_cover(p)
    order = cover.permuted(rnd.sample(range(cover.width), cover.width))
    rel = defined_order(p, order)
    assert is_linear_order(p.elements, rel)
    for chain in order.chains:
        for x, y in combinations(chain, 2):
            assert (x, y) in rel


def test_colours_do_not_break_linearity():
    rng = random.Random(8)
    for _ in range(40):
        p = random_poset(rng, rng.randint(1, 7), 0.3, colours=3)
        assert is_linear_order(p.elements, defined_order(p, width_and_chain_cover(p)[1]))


# -- model checking ---------------------------------------------------------


def test_least_element_exists():
    phi = parse_formula("exists x. forall y. leq(x, y)")
    rng = random.Random(1)
    for _ in range(20):
        assert poset_model_check(random_poset(rng, rng.randint(1, 6), 0.4), phi)


def test_order_free_formula_matches_evaluate():
    phi = parse_formula("exists x. exists y. (!x = y & po(x, y))")
    rng = random.Random(2)
    for _ in range(20):
        p = random_poset(rng, rng.randint(1, 6), 0.3)
        assert poset_model_check(p, phi) == evaluate(p.to_structure(), phi)


def test_invariance_check_rejects_order_dependent_formula():
    phi = parse_formula("exists x. forall y. (leq(x, y) & Colour_a(x))")
    p = ColouredPoset.from_relations({1, 2}, [], {1: "a", 2: "b"})
    with pytest.raises(InputError, match="not order-invariant"):
        poset_model_check(p, phi, verify_invariance=True)


def test_chain_order_permutation_keeps_invariant_verdict():
    phi = parse_formula("exists x. exists y. (leq(x, y) & !x = y & !po(x, y) & !po(y, x))")
    p = WIDTH_TWO
    assert poset_model_check(p, phi, chain_order=[0, 1]) == poset_model_check(p, phi, chain_order=[1, 0]) is True


# -- file format ---------------------------------------------------------------


def test_poset_roundtrip():
    p = ColouredPoset.from_relations(range(1, 5), [(1, 3), (1, 4), (2, 4)], {2: "blue"})
    q = parse_poset(format_poset(p))
    assert q == p


def test_parse_poset_adds_reflexive_pairs_and_validates():
    p = parse_poset("poset 3\nle 1 2\nle 2 3\nle 1 3\ncol 3 red\n")
    assert (2, 2) in p.leq and p.colouring[3] == "red"
    with pytest.raises(FormatError, match="transitivity"):
        parse_poset("poset 3\nle 1 2\nle 2 3\n")
    with pytest.raises(FormatError):
        parse_poset("poset 2\nle 1 2\nle 2 1\n")
    with pytest.raises(FormatError):
        parse_poset("poset 2\nle 1 5\n")
    with pytest.raises(FormatError):
        parse_poset("le 1 2\n")
