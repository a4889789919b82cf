"""Finite relational vocabularies and structures."""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from succinv.errors import ArityError, FormatError, InputError
from succinv.graph import Graph, norm_edge

SUCC = "succ"
LEQ = "leq"
RESERVED = {SUCC: 2, LEQ: 2}

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Vocabulary:
    """Relation symbols with their arities, in declaration order."""

    symbols: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for name, arity in self.symbols:
            if not _NAME.match(name):
                raise InputError(f"invalid relation name {name!r}")
            if name in seen:
                raise InputError(f"duplicate relation name {name!r}")
            if arity < 1:
                raise InputError(f"arity of {name} must be >= 1")
            seen.add(name)

    @classmethod
    def of(cls, *symbols: tuple[str, int]) -> Vocabulary:
        return cls(tuple(symbols))

    def arity(self, name: str) -> int:
        for n, a in self.symbols:
            if n == name:
                return a
        raise KeyError(name)

    def __contains__(self, name: object) -> bool:
        return any(n == name for n, _ in self.symbols)

    def names(self) -> list[str]:
        return [n for n, _ in self.symbols]

    def as_dict(self) -> dict[str, int]:
        return dict(self.symbols)

    def extend(self, *symbols: tuple[str, int]) -> Vocabulary:
        return Vocabulary(self.symbols + tuple(symbols))

    def is_base(self) -> bool:
        """True if no reserved symbol (``succ``, ``leq``) is declared."""
        return not any(n in RESERVED for n in self.names())


@dataclass(frozen=True)
class Structure:
    """A finite structure: universe plus one tuple set per vocabulary symbol."""

    vocabulary: Vocabulary
    universe: frozenset[int]
    relations: Mapping[str, frozenset[tuple[int, ...]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        rels = {name: frozenset(self.relations.get(name, ())) for name in self.vocabulary.names()}
        extra = set(self.relations) - set(rels)
        if extra:
            raise InputError(f"relations {sorted(extra)} are not in the vocabulary")
        for name, tuples in rels.items():
            arity = self.vocabulary.arity(name)
            for tup in tuples:
                if len(tup) != arity:
                    raise ArityError(f"tuple {tup} of {name} has length {len(tup)}, arity is {arity}")
                for x in tup:
                    if x not in self.universe:
                        raise InputError(f"tuple {tup} of {name} mentions {x} outside the universe")
        object.__setattr__(self, "relations", rels)

    @classmethod
    def build(
        cls,
        universe: Iterable[int],
        relations: Mapping[str, Iterable[Iterable[int]]],
        vocabulary: Vocabulary | None = None,
    ) -> Structure:
        """Convenience constructor; infers the vocabulary from tuple lengths."""
        rels = {name: frozenset(tuple(t) for t in tuples) for name, tuples in relations.items()}
        if vocabulary is None:
            symbols = []
            for name, tuples in rels.items():
                lengths = {len(t) for t in tuples}
                if len(lengths) != 1:
                    raise InputError(f"cannot infer arity of {name}; pass a vocabulary")
                symbols.append((name, lengths.pop()))
            vocabulary = Vocabulary(tuple(symbols))
        return cls(vocabulary, frozenset(universe), rels)

    def size(self) -> int:
        """Encoding size: universe plus the total length of all tuples."""
        return len(self.universe) + sum(len(t) for ts in self.relations.values() for t in ts)

    def expand(self, extra: Vocabulary, relations: Mapping[str, Iterable[tuple[int, ...]]]) -> Structure:
        """Expansion by new symbols; existing relations are kept as they are."""
        clash = set(extra.names()) & set(self.vocabulary.names())
        if clash:
            raise InputError(f"symbols {sorted(clash)} already in the vocabulary")
        rels = dict(self.relations)
        rels.update({name: frozenset(relations.get(name, ())) for name in extra.names()})
        return Structure(Vocabulary(self.vocabulary.symbols + extra.symbols), self.universe, rels)

    def reduct(self, names: Iterable[str]) -> Structure:
        keep = set(names)
        voc = Vocabulary(tuple(s for s in self.vocabulary.symbols if s[0] in keep))
        return Structure(voc, self.universe, {n: self.relations[n] for n in voc.names()})


def gaifman_graph(a: Structure) -> Graph:
    """Vertices are the universe; ``xy`` is an edge iff ``x != y`` share a tuple."""
    edges = set()
    for tuples in a.relations.values():
        for tup in tuples:
            for x, y in combinations(set(tup), 2):
                edges.add(norm_edge(x, y))
    return Graph(frozenset(a.universe), frozenset(edges))


def structure_from_graph(g: Graph, symbol: str = "E") -> Structure:
    """The symmetric binary structure whose Gaifman graph is ``g``."""
    tuples = set()
    for u, v in g.edges:
        tuples.add((u, v))
        tuples.add((v, u))
    return Structure(Vocabulary(((symbol, 2),)), g.vertices, {symbol: frozenset(tuples)})


# -- text format -------------------------------------------------------------

_TUPLE = re.compile(r"\(\s*([^()]*?)\s*\)")


def parse_structure(text: str) -> Structure:
    """Parse the ``vocab`` / ``universe`` / ``rel`` line format."""
    vocab: Vocabulary | None = None
    n: int | None = None
    rels: dict[str, set[tuple[int, ...]]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "vocab":
            symbols = []
            for tok in rest.split():
                name, slash, arity = tok.partition("/")
                if not slash or not arity.isdigit():
                    raise FormatError(f"bad symbol declaration {tok!r}", lineno)
                symbols.append((name, int(arity)))
            try:
                vocab = Vocabulary(tuple(symbols))
            except InputError as exc:
                raise FormatError(str(exc), lineno) from None
        elif head == "universe":
            if not rest.strip().isdigit():
                raise FormatError("expected 'universe <n>'", lineno)
            n = int(rest)
        elif head == "rel":
            if vocab is None:
                raise FormatError("'rel' before 'vocab'", lineno)
            name, colon, body = rest.partition(":")
            name = name.strip()
            if not colon or name not in vocab:
                raise FormatError(f"undeclared relation in {line!r}", lineno)
            tuples = rels.setdefault(name, set())
            leftover = _TUPLE.sub("", body).strip()
            if leftover:
                raise FormatError(f"unparsable tuple text {leftover!r}", lineno)
            for m in _TUPLE.finditer(body):
                try:
                    tup = tuple(int(x) for x in m.group(1).split(","))
                except ValueError:
                    raise FormatError(f"bad tuple ({m.group(1)})", lineno) from None
                if len(tup) != vocab.arity(name):
                    raise FormatError(f"tuple {tup} does not match arity of {name}", lineno)
                if n is not None and any(not 1 <= x <= n for x in tup):
                    raise FormatError(f"tuple {tup} leaves the universe 1..{n}", lineno)
                tuples.add(tup)
        else:
            raise FormatError(f"unknown directive {head!r}", lineno)
    if vocab is None or n is None:
        raise FormatError("structure needs 'vocab' and 'universe' lines")
    try:
        return Structure(vocab, frozenset(range(1, n + 1)), {k: frozenset(v) for k, v in rels.items()})
    except InputError as exc:
        raise FormatError(str(exc)) from None


def format_structure(a: Structure) -> str:
    n = len(a.universe)
    if a.universe != frozenset(range(1, n + 1)):
        raise InputError("structure text format needs universe 1..n")
    out = ["vocab " + " ".join(f"{name}/{ar}" for name, ar in a.vocabulary.symbols), f"universe {n}"]
    for name in a.vocabulary.names():
        tuples = sorted(a.relations[name])
        out.append(f"rel {name}: " + " ".join("(" + ",".join(map(str, t)) + ")" for t in tuples))
    return "\n".join(out) + "\n"


def read_structure(path: str | Path) -> Structure:
    return parse_structure(Path(path).read_text(encoding="utf-8"))
