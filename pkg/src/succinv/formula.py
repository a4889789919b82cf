"""First-order formula syntax: AST, pretty printer and parser.

Grammar (lowest binding first)::

    formula := iff
    iff     := imp ('<->' imp)*          left associative
    imp     := or ('->' or)*             right associative
    or      := and ('|' and)*            left associative
    and     := unary ('&' unary)*        left associative
    unary   := '!' unary | 'forall' var '.' unary | 'exists' var '.' unary
             | atom | '(' formula ')'
    atom    := name '(' var (',' var)* ')' | var '=' var | 'true' | 'false'

Quantifiers bind as tightly as negation, so ``forall x. A & B`` reads as
``(forall x. A) & B``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

from succinv.errors import ArityError, FormulaSyntaxError
from succinv.structure import RESERVED, Vocabulary


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return pretty(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {pretty(self)}>"

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula


TRUE = Top()
FALSE = Bottom()

Binary = (And, Or, Implies, Iff)
Quantifier = (Exists, Forall)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    out: Formula | None = None
    for p in parts:
        out = p if out is None else And(out, p)
    return TRUE if out is None else out


def disj(parts: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``false``."""
    out: Formula | None = None
    for p in parts:
        out = p if out is None else Or(out, p)
    return FALSE if out is None else out


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not) or isinstance(f, Quantifier):
        yield from subformulas(f.body)
    elif isinstance(f, Binary):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset(f.args)
    if isinstance(f, Eq):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, Binary):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, Quantifier):
        return free_variables(f.body) - {f.var}
    return frozenset()


def all_variables(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            out.update(g.args)
        elif isinstance(g, Eq):
            out.update((g.left, g.right))
        elif isinstance(g, Quantifier):
            out.add(g.var)
    return frozenset(out)


def symbols(f: Formula) -> dict[str, int]:
    """Relation symbols used in ``f`` with their arities."""
    return {g.name: len(g.args) for g in subformulas(f) if isinstance(g, Atom)}


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, Binary):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    if isinstance(f, Quantifier):
        return 1 + quantifier_depth(f.body)
    return 0


def check_vocabulary(f: Formula, vocabulary: Vocabulary | Mapping[str, int]) -> None:
    """Raise :class:`ArityError` if ``f`` uses an undeclared or misapplied symbol."""
    arities = vocabulary.as_dict() if isinstance(vocabulary, Vocabulary) else dict(vocabulary)
    for g in subformulas(f):
        if isinstance(g, Atom):
            expected = arities.get(g.name, RESERVED.get(g.name))
            if expected is None:
                raise ArityError(f"relation {g.name} is not in the vocabulary")
            if expected != len(g.args):
                raise ArityError(f"{g.name} has arity {expected}, used with {len(g.args)} arguments")


# -- pretty printing ---------------------------------------------------------

_LEVEL = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_UNARY_LEVEL = 5
_ATOM_LEVEL = 6


def _level(f: Formula) -> int:
    if isinstance(f, Binary):
        return _LEVEL[type(f)]
    if isinstance(f, (Not, Exists, Forall)):
        return _UNARY_LEVEL
    return _ATOM_LEVEL


def pretty(f: Formula) -> str:
    """Render ``f`` with the fewest parentheses the grammar allows."""

    def go(g: Formula, need: int) -> str:
        text = render(g)
        return f"({text})" if _level(g) < need else text

    def render(g: Formula) -> str:
        if isinstance(g, Top):
            return "true"
        if isinstance(g, Bottom):
            return "false"
        if isinstance(g, Atom):
            return f"{g.name}({', '.join(g.args)})"
        if isinstance(g, Eq):
            return f"{g.left} = {g.right}"
        if isinstance(g, Not):
            return "!" + go(g.body, _UNARY_LEVEL)
        if isinstance(g, Exists):
            return f"exists {g.var}. " + go(g.body, _UNARY_LEVEL)
        if isinstance(g, Forall):
            return f"forall {g.var}. " + go(g.body, _UNARY_LEVEL)
        lvl = _LEVEL[type(g)]
        op = _OPS[type(g)]
        if isinstance(g, Implies):
            return f"{go(g.left, lvl + 1)} {op} {go(g.right, lvl)}"
        return f"{go(g.left, lvl)} {op} {go(g.right, lvl + 1)}"

    return render(f)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<->|->|[()!&|,.=])|([A-Za-z_][A-Za-z0-9_]*))")
_KEYWORDS = {"forall", "exists", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        tok = m.group(1) or m.group(2)
        tokens.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def error(self, msg: str) -> FormulaSyntaxError:
        tok = self.peek()
        found = repr(tok) if tok else "end of input"
        return FormulaSyntaxError(f"{msg}, found {found}", self.pos(), self.text)

    def take(self, expected: str) -> None:
        if self.peek() != expected:
            raise self.error(f"expected {expected!r}")
        self.i += 1

    def ident(self, what: str) -> str:
        tok = self.peek()
        if not tok or not (tok[0].isalpha() or tok[0] == "_") or tok in _KEYWORDS:
            raise self.error(f"expected {what}")
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek():
            raise self.error("unexpected trailing input")
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek() == "<->":
            self.i += 1
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        parts = [self.or_()]
        while self.peek() == "->":
            self.i += 1
            parts.append(self.or_())
        f = parts[-1]
        for p in reversed(parts[:-1]):
            f = Implies(p, f)
        return f

    def or_(self) -> Formula:
        f = self.and_()
        while self.peek() == "|":
            self.i += 1
            f = Or(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.i += 1
            return Not(self.unary())
        if tok in ("forall", "exists"):
            self.i += 1
            var = self.ident("a variable")
            self.take(".")
            body = self.unary()
            return Forall(var, body) if tok == "forall" else Exists(var, body)
        if tok == "(":
            self.i += 1
            f = self.iff()
            self.take(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok == "true":
            self.i += 1
            return TRUE
        if tok == "false":
            self.i += 1
            return FALSE
        name = self.ident("an atom")
        if self.peek() == "(":
            self.i += 1
            args = [self.ident("a variable")]
            while self.peek() == ",":
                self.i += 1
                args.append(self.ident("a variable"))
            self.take(")")
            return Atom(name, tuple(args))
        if self.peek() == "=":
            self.i += 1
            return Eq(name, self.ident("a variable"))
        raise self.error("expected '(' or '=' after identifier")


def parse_formula(text: str, vocabulary: Vocabulary | Mapping[str, int] | None = None) -> Formula:
    """Parse ``text``; with a vocabulary, also check every atom's arity.

    The reserved symbols ``succ`` and ``leq`` are always binary, and a symbol
    must be used with one arity throughout.
    """
    f = _Parser(text).parse()
    seen: dict[str, int] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            if g.name in RESERVED and len(g.args) != RESERVED[g.name]:
                raise ArityError(f"{g.name} is binary, used with {len(g.args)} arguments")
            if seen.setdefault(g.name, len(g.args)) != len(g.args):
                raise ArityError(f"{g.name} used with arities {seen[g.name]} and {len(g.args)}")
    if vocabulary is not None:
        check_vocabulary(f, vocabulary)
    return f
