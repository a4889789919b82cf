"""Coloured posets: validation, width via minimum chain cover, and order-invariant model checking.

The poset's own order is the binary symbol ``po``; the reserved symbol
``leq`` stands for an arbitrary linear order, and gets replaced by a
formula that orders the chains of a minimum chain cover one after another.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from succinv.errors import FormatError, InputError
from succinv.evaluate import evaluate, satisfying_pairs, substitute_atom
from succinv.formula import And, Atom, Formula, Or, disj
from succinv.graph import _content_lines
from succinv.invariance import MAX_ORDER_EXHAUSTIVE, check_order_invariance
from succinv.structure import LEQ, Structure, Vocabulary

PO = "po"
DEFAULT_COLOUR = "0"
MAX_BRUTE_ANTICHAIN = 15

Colour = Hashable


def colour_symbol(colour: Colour) -> str:
    """Unary predicate name for a colour; ``(c, j)`` pairs from recolouring become ``Col_c_j``."""
    if isinstance(colour, tuple):
        return "Col_" + "_".join(str(part) for part in colour)
    return f"Colour_{colour}"


@dataclass(frozen=True)
class ColouredPoset:
    """Elements, the order as a set of pairs ``(x, y)`` meaning ``x <= y``, and a colouring.

    The axioms are not enforced here; see :func:`validate_poset`.
    """

    elements: frozenset[int]
    leq: frozenset[tuple[int, int]]
    colouring: Mapping[int, Colour] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", frozenset(self.elements))
        object.__setattr__(self, "leq", frozenset(self.leq))
        colouring = {x: self.colouring.get(x, DEFAULT_COLOUR) for x in self.elements}
        object.__setattr__(self, "colouring", colouring)
        for x, y in self.leq:
            if x not in self.elements or y not in self.elements:
                raise InputError(f"order pair ({x}, {y}) leaves the element set")

    @classmethod
    def from_relations(
        cls,
        elements: Iterable[int],
        pairs: Iterable[tuple[int, int]],
        colouring: Mapping[int, Colour] | None = None,
        *,
        transitive: bool = False,
    ) -> ColouredPoset:
        """Add the reflexive (and optionally transitive) closure of ``pairs``."""
        elements = frozenset(elements)
        rel = set(pairs) | {(x, x) for x in elements}
        if transitive:
            rel = _transitive_closure(elements, rel)
        return cls(elements, frozenset(rel), dict(colouring or {}))

    def less(self, x: int, y: int) -> bool:
        return x != y and (x, y) in self.leq

    def comparable(self, x: int, y: int) -> bool:
        return (x, y) in self.leq or (y, x) in self.leq

    def colours(self) -> list[Colour]:
        return sorted(set(self.colouring.values()), key=repr)

    def to_structure(self) -> Structure:
        """Structure over ``po`` plus one unary predicate per colour in use."""
        relations: dict[str, set[tuple[int, ...]]] = {PO: set(self.leq)}
        for x, col in self.colouring.items():
            relations.setdefault(colour_symbol(col), set()).add((x,))
        symbols = [(PO, 2)] + [(colour_symbol(col), 1) for col in self.colours()]
        return Structure(Vocabulary(tuple(symbols)), frozenset(self.elements),
                         {k: frozenset(v) for k, v in relations.items()})


def _transitive_closure(elements: Iterable[int], rel: set[tuple[int, int]]) -> set[tuple[int, int]]:
    elements = sorted(elements)
    reach = {x: {y for (a, y) in rel if a == x} for x in elements}
    for k in elements:
        for x in elements:
            if k in reach[x]:
                reach[x] |= reach[k]
    return {(x, y) for x in elements for y in reach[x]}


@dataclass(frozen=True)
class PosetReport:
    not_reflexive: tuple[int, ...] = ()
    not_antisymmetric: tuple[tuple[int, int], ...] = ()
    not_transitive: tuple[tuple[int, int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return not (self.not_reflexive or self.not_antisymmetric or self.not_transitive)

    def describe(self) -> str:
        if self.ok:
            return "valid poset"
        parts = []
        if self.not_reflexive:
            parts.append(f"reflexivity fails at {list(self.not_reflexive)}")
        if self.not_antisymmetric:
            x, y = self.not_antisymmetric[0]
            parts.append(f"antisymmetry fails: {x} <= {y} and {y} <= {x}")
        if self.not_transitive:
            x, y, z = self.not_transitive[0]
            parts.append(f"transitivity fails: {x} <= {y} <= {z} but not {x} <= {z}")
        return "; ".join(parts)


def validate_poset(p: ColouredPoset) -> PosetReport:
    elems = sorted(p.elements)
    refl = tuple(x for x in elems if (x, x) not in p.leq)
    anti = tuple((x, y) for x, y in combinations(elems, 2) if (x, y) in p.leq and (y, x) in p.leq)
    succ: dict[int, list[int]] = {x: [] for x in elems}
    for x, y in sorted(p.leq):
        succ[x].append(y)
    trans = tuple(
        (x, y, z) for x in elems for y in succ[x] for z in succ[y] if (x, z) not in p.leq
    )
    return PosetReport(refl, anti, trans)


def _require_valid(p: ColouredPoset) -> None:
    report = validate_poset(p)
    if not report.ok:
        raise InputError(f"not a poset: {report.describe()}")


@dataclass(frozen=True)
class ChainCover:
    """Disjoint chains, each listed from least to greatest, ordered by their smallest element id."""

    chains: tuple[tuple[int, ...], ...]

    @property
    def width(self) -> int:
        return len(self.chains)

    def index_of(self) -> dict[int, int]:
        """Element -> 1-based chain index."""
        return {x: j for j, chain in enumerate(self.chains, 1) for x in chain}

    def permuted(self, order: Sequence[int]) -> ChainCover:
        """Reorder chains; ``order`` lists the old 0-based positions in their new order."""
        if sorted(order) != list(range(len(self.chains))):
            raise InputError("chain order must be a permutation of the chain positions")
        return ChainCover(tuple(self.chains[i] for i in order))

    def problems(self, p: ColouredPoset) -> list[str]:
        out = []
        seen: set[int] = set()
        for chain in self.chains:
            for x in chain:
                if x in seen:
                    out.append(f"{x} lies in two chains")
                seen.add(x)
            for x, y in zip(chain, chain[1:]):
                if (x, y) not in p.leq:
                    out.append(f"chain step {x} -> {y} is not an order relation")
        if seen != p.elements:
            out.append(f"uncovered elements {sorted(p.elements - seen)}")
        return out


def _max_matching(elems: list[int], adj: Mapping[int, list[int]]) -> dict[int, int]:
    """Augmenting-path bipartite matching; returns right -> left."""
    match_right: dict[int, int] = {}

    def augment(x: int, visited: set[int]) -> bool:
        for y in adj[x]:
            if y in visited:
                continue
            visited.add(y)
            if y not in match_right or augment(match_right[y], visited):
                match_right[y] = x
                return True
        return False

    for x in elems:
        augment(x, set())
    return match_right


@dataclass(frozen=True)
class WidthCertificate:
    cover: ChainCover
    antichain: tuple[int, ...]

    @property
    def width(self) -> int:
        return self.cover.width


def width_certificate(p: ColouredPoset) -> WidthCertificate:
    """Minimum chain cover and an antichain of the same size.

    The cover is a minimum path cover of the strict order, found by maximum
    bipartite matching; the antichain comes from the matching's minimum
    vertex cover and proves the cover optimal.
    """
    _require_valid(p)
    elems = sorted(p.elements)
    adj = {x: [y for y in elems if p.less(x, y)] for x in elems}
    match_right = _max_matching(elems, adj)
    nxt = {x: y for y, x in match_right.items()}
    chains = []
    for x in elems:
        if x in match_right:
            continue
        chain = [x]
        while chain[-1] in nxt:
            chain.append(nxt[chain[-1]])
        chains.append(tuple(chain))
    chains.sort(key=min)
    cover = ChainCover(tuple(chains))

    # minimum vertex cover: unmatched left vertices, closed under alternating paths
    matched_left = set(nxt)
    left_reached = {x for x in elems if x not in matched_left}
    right_reached: set[int] = set()
    stack = list(left_reached)
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in right_reached:
                right_reached.add(y)
                z = match_right.get(y)
                if z is not None and z not in left_reached:
                    left_reached.add(z)
                    stack.append(z)
    antichain = tuple(x for x in elems if x in left_reached and x not in right_reached)
    if len(antichain) != cover.width or not is_antichain(p, antichain):
        raise AssertionError("matching did not yield a matching antichain")
    return WidthCertificate(cover, antichain)


def width_and_chain_cover(p: ColouredPoset) -> tuple[int, ChainCover]:
    cert = width_certificate(p)
    return cert.width, cert.cover


def is_antichain(p: ColouredPoset, xs: Iterable[int]) -> bool:
    return not any(p.comparable(x, y) for x, y in combinations(list(xs), 2))


def maximum_antichain_size(p: ColouredPoset, *, limit: int = MAX_BRUTE_ANTICHAIN) -> int:
    """Largest antichain by exhaustive branching; meant as a cross-check on small posets."""
    elems = sorted(p.elements)
    if len(elems) > limit:
        raise InputError(f"brute-force antichain search limited to {limit} elements")
    idx = {x: i for i, x in enumerate(elems)}
    comp = [0] * len(elems)
    for x, y in p.leq:
        if x != y:
            comp[idx[x]] |= 1 << idx[y]
            comp[idx[y]] |= 1 << idx[x]

    def best(candidates: int) -> int:
        if not candidates:
            return 0
        i = (candidates & -candidates).bit_length() - 1
        rest = candidates & ~(1 << i)
        skip = best(rest)
        take = 1 + best(rest & ~comp[i])
        return max(skip, take)

    return best((1 << len(elems)) - 1)


def recolour(p: ColouredPoset, cover: ChainCover) -> ColouredPoset:
    """Colour each element ``v`` in chain ``j`` by ``(colour(v), j)``."""
    index = cover.index_of()
    missing = p.elements - index.keys()
    if missing:
        raise InputError(f"elements {sorted(missing)} lie in no chain")
    return ColouredPoset(p.elements, p.leq, {x: (p.colouring[x], index[x]) for x in p.elements})


def build_phi_leq(colours: Iterable[Colour], w: int, order_symbol: str = PO) -> Formula:
    """Linear order in ``x, y``: earlier chains first, the poset order inside a chain.

    Uses the unary predicates ``Col_c_j`` of :func:`recolour`; the empty
    first disjunction (``w = 1``) is false.
    """
    colours = sorted(set(colours), key=repr)

    def col(c: Colour, j: int, var: str) -> Formula:
        return Atom(colour_symbol((c, j)), (var,))

    earlier = disj(
        And(col(cx, i, "x"), col(cy, j, "y"))
        for i in range(1, w + 1)
        for j in range(i + 1, w + 1)
        for cx in colours
        for cy in colours
    )
    same = disj(
        And(And(col(cx, i, "x"), col(cy, i, "y")), Atom(order_symbol, ("x", "y")))
        for i in range(1, w + 1)
        for cx in colours
        for cy in colours
    )
    return Or(earlier, same)


def recoloured_structure(p: ColouredPoset, cover: ChainCover, colours: Iterable[Colour] | None = None,
                         ) -> Structure:
    """The poset structure with its original colour predicates plus every ``Col_c_j`` used by ``phi_leq``."""
    base = p.to_structure()
    palette = sorted(set(colours if colours is not None else p.colouring.values()), key=repr)
    q = recolour(p, cover)
    rel: dict[str, set[tuple[int]]] = {}
    for c in palette:
        for j in range(1, cover.width + 1):
            rel[colour_symbol((c, j))] = set()
    for x, col in q.colouring.items():
        rel[colour_symbol(col)].add((x,))
    extra = Vocabulary(tuple((name, 1) for name in rel))
    return base.expand(extra, rel)


def poset_model_check(
    p: ColouredPoset,
    phi: Formula,
    *,
    chain_order: Sequence[int] | None = None,
    verify_invariance: bool = False,
    assignment: Mapping[str, int] | None = None,
) -> bool:
    """Decide ``p |= phi`` for order-invariant ``phi`` using ``leq`` for a linear order.

    ``chain_order`` reorders the cover's chains before building the order.
    With ``verify_invariance`` the formula is first checked against every
    linear order (at most :data:`MAX_ORDER_EXHAUSTIVE` elements) and an
    :class:`InputError` is raised on a violation.
    """
    _require_valid(p)
    if verify_invariance:
        verdict = check_order_invariance(p.to_structure(), phi, max_exhaustive=MAX_ORDER_EXHAUSTIVE,
                                         assignment=assignment)
        if not verdict.invariant:
            raise InputError(f"formula is not order-invariant on this poset; witness orders {verdict.witness}")
    _, cover = width_and_chain_cover(p)
    if chain_order is not None:
        cover = cover.permuted(chain_order)
    colours = p.colours()
    s = recoloured_structure(p, cover, colours)
    phi_leq = build_phi_leq(colours, cover.width)
    return evaluate(s, substitute_atom(phi, LEQ, phi_leq), assignment)


def defined_order(p: ColouredPoset, cover: ChainCover) -> frozenset[tuple[int, int]]:
    """Pairs satisfying ``phi_leq`` on the recoloured poset."""
    colours = p.colours()
    return satisfying_pairs(recoloured_structure(p, cover, colours), build_phi_leq(colours, cover.width))


# -- file format -------------------------------------------------------------


def parse_poset(text: str) -> ColouredPoset:
    """``poset n``, then ``le a b`` and ``col a colour`` lines; elements are ``1..n``.

    The reflexive closure is added; the result is checked to be a poset.
    """
    n: int | None = None
    pairs = []
    colouring: dict[int, str] = {}
    for lineno, toks in _content_lines(text):
        head = toks[0]
        if n is None:
            if head != "poset" or len(toks) != 2:
                raise FormatError("expected header 'poset <n>'", lineno)
            n = _int(toks[1], lineno)
            if n < 0:
                raise FormatError("element count must be >= 0", lineno)
            continue
        if head == "le" and len(toks) == 3:
            a, b = _int(toks[1], lineno), _int(toks[2], lineno)
            for x in (a, b):
                if not 1 <= x <= n:
                    raise FormatError(f"element {x} outside 1..{n}", lineno)
            pairs.append((a, b))
        elif head == "col" and len(toks) == 3:
            a = _int(toks[1], lineno)
            if not 1 <= a <= n:
                raise FormatError(f"element {a} outside 1..{n}", lineno)
            if not toks[2].replace("_", "").isalnum():
                raise FormatError(f"colour {toks[2]!r} must be alphanumeric", lineno)
            if a in colouring and colouring[a] != toks[2]:
                raise FormatError(f"element {a} coloured twice", lineno)
            colouring[a] = toks[2]
        else:
            raise FormatError(f"unrecognised line {' '.join(toks)!r}", lineno)
    if n is None:
        raise FormatError("missing header 'poset <n>'")
    p = ColouredPoset.from_relations(range(1, n + 1), pairs, colouring)
    report = validate_poset(p)
    if not report.ok:
        raise FormatError(f"not a poset: {report.describe()}")
    return p


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"expected an integer, got {tok!r}", lineno) from None


def format_poset(p: ColouredPoset) -> str:
    elems = sorted(p.elements)
    if elems != list(range(1, len(elems) + 1)):
        raise InputError("poset files need elements 1..n")
    lines = [f"poset {len(elems)}"]
    lines += [f"le {x} {y}" for x, y in sorted(p.leq) if x != y]
    lines += [f"col {x} {p.colouring[x]}" for x in elems if p.colouring[x] != DEFAULT_COLOUR]
    return "\n".join(lines) + "\n"


def read_poset(path: str | Path) -> ColouredPoset:
    return parse_poset(Path(path).read_text(encoding="utf-8"))
