"""Naive Tarskian evaluation and capture-avoiding atom substitution."""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from itertools import count

from succinv.errors import ArityError, EvaluationError, InputError
from succinv.formula import (
    Atom,
    And,
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
    all_variables,
    free_variables,
)
from succinv.structure import Structure

Env = dict[str, int]
Compiled = Callable[[Env], bool]


def _compile(f: Formula, a: Structure, universe: Sequence[int]) -> Compiled:
    if isinstance(f, Top):
        return lambda env: True
    if isinstance(f, Bottom):
        return lambda env: False
    if isinstance(f, Atom):
        if f.name not in a.relations:
            raise InputError(f"relation {f.name} is not interpreted in the structure")
        if a.vocabulary.arity(f.name) != len(f.args):
            raise ArityError(f"{f.name} has arity {a.vocabulary.arity(f.name)}, used with {len(f.args)}")
        rel = a.relations[f.name]
        args = f.args
        if len(args) == 1:
            (x,) = args
            return lambda env: (env[x],) in rel
        if len(args) == 2:
            x, y = args
            return lambda env: (env[x], env[y]) in rel
        return lambda env: tuple(env[v] for v in args) in rel
    if isinstance(f, Eq):
        x, y = f.left, f.right
        return lambda env: env[x] == env[y]
    if isinstance(f, Not):
        body = _compile(f.body, a, universe)
        return lambda env: not body(env)
    if isinstance(f, (And, Or, Implies, Iff)):
        left = _compile(f.left, a, universe)
        right = _compile(f.right, a, universe)
        if isinstance(f, And):
            return lambda env: left(env) and right(env)
        if isinstance(f, Or):
            return lambda env: left(env) or right(env)
        if isinstance(f, Implies):
            return lambda env: (not left(env)) or right(env)
        return lambda env: left(env) == right(env)
    if isinstance(f, (Exists, Forall)):
        body = _compile(f.body, a, universe)
        var = f.var
        want = isinstance(f, Exists)

        def quant(env: Env) -> bool:
            saved = env.get(var)
            had = var in env
            try:
                for x in universe:
                    env[var] = x
                    if body(env) == want:
                        return want
                return not want
            finally:
                if had:
                    env[var] = saved  # type: ignore[assignment]
                else:
                    env.pop(var, None)

        return quant
    raise TypeError(f"not a formula: {f!r}")


def evaluate(a: Structure, phi: Formula, assignment: Mapping[str, int] | None = None) -> bool:
    """Decide ``a |= phi[assignment]`` by recursion over the syntax tree.

    Quantifiers range over the universe in ascending order. Runtime is
    ``O(|universe|^depth * |phi|)``; nothing larger than one assignment is
    materialised.
    """
    env: Env = dict(assignment or {})
    missing = free_variables(phi) - env.keys()
    if missing:
        raise EvaluationError(f"unbound free variables {sorted(missing)}")
    for v, x in env.items():
        if x not in a.universe:
            raise EvaluationError(f"variable {v} assigned {x}, which is outside the universe")
    return _compile(phi, a, sorted(a.universe))(env)


def satisfying_pairs(a: Structure, phi: Formula, x: str = "x", y: str = "y") -> frozenset[tuple[int, int]]:
    """All pairs ``(p, q)`` with ``a |= phi[x:=p, y:=q]``."""
    extra = free_variables(phi) - {x, y}
    if extra:
        raise EvaluationError(f"unbound free variables {sorted(extra)}")
    fn = _compile(phi, a, sorted(a.universe))
    out = set()
    for p in sorted(a.universe):
        for q in sorted(a.universe):
            if fn({x: p, y: q}):
                out.add((p, q))
    return frozenset(out)


def substitute_atom(
    phi: Formula,
    symbol: str,
    definition: Formula,
    params: Sequence[str] = ("x", "y"),
) -> Formula:
    """Replace every ``symbol(t1, ..., tn)`` in ``phi`` by ``definition[params := t]``.

    Bound variables of ``definition`` get fresh names at each site, so no
    argument is captured.
    """
    params = tuple(params)
    if len(set(params)) != len(params):
        raise InputError("designated variables must be distinct")
    extra = free_variables(definition) - set(params)
    if extra:
        raise InputError(f"definition has free variables {sorted(extra)} besides {list(params)}")
    taken = set(all_variables(phi)) | set(all_variables(definition))
    fresh_ids = count(1)

    def fresh() -> str:
        while True:
            name = f"_z{next(fresh_ids)}"
            if name not in taken:
                taken.add(name)
                return name

    def instantiate(f: Formula, mapping: dict[str, str]) -> Formula:
        if isinstance(f, Atom):
            return Atom(f.name, tuple(mapping.get(v, v) for v in f.args))
        if isinstance(f, Eq):
            return Eq(mapping.get(f.left, f.left), mapping.get(f.right, f.right))
        if isinstance(f, Not):
            return Not(instantiate(f.body, mapping))
        if isinstance(f, (And, Or, Implies, Iff)):
            return type(f)(instantiate(f.left, mapping), instantiate(f.right, mapping))
        if isinstance(f, (Exists, Forall)):
            new = fresh()
            return type(f)(new, instantiate(f.body, {**mapping, f.var: new}))
        return f

    def walk(f: Formula) -> Formula:
        if isinstance(f, Atom):
            if f.name != symbol:
                return f
            if len(f.args) != len(params):
                raise ArityError(f"{symbol} used with {len(f.args)} arguments, definition takes {len(params)}")
            return instantiate(definition, dict(zip(params, f.args)))
        if isinstance(f, Not):
            return Not(walk(f.body))
        if isinstance(f, (And, Or, Implies, Iff)):
            return type(f)(walk(f.left), walk(f.right))
        if isinstance(f, (Exists, Forall)):
            return type(f)(f.var, walk(f.body))
        return f

    return walk(phi)
