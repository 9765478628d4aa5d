from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from trs.parsing import INNERMOST, Rule, Trs
from trs.term import (COMPOUND, App, Symbol, Term, Var, format_term, function_symbols, sharp_symbol,
                      subterms)

WDP = "WDP"
WIDP = "WIDP"
DP = "DP"

HOLE = Var("[]", -1)


def sharp(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    return App(sharp_symbol(t.symbol), t.args)


def unsharp(t: Term) -> Term:
    if isinstance(t, App) and t.symbol.origin is not None:
        return App(t.symbol.origin, t.args)
    return t


def decompose(t: Term, defined: frozenset[Symbol], include_variables: bool = True) -> tuple[Term, list[Term]]:
    """
    Split t into a context and its outermost subterms rooted in the mark set.

    Args:
        t (Term): term to split.
        defined (frozenset[Symbol]): defined symbols D.
        include_variables (bool, optional): mark set D ∪ V when True, D otherwise.

    Returns:
        tuple[Term, list[Term]]: context with HOLE at every cut, and the cut subterms left to right.
    """
    if isinstance(t, Var):
        return (HOLE, [t]) if include_variables else (t, [])
    if t.symbol in defined:
        return HOLE, [t]
    found: list[Term] = []
    args = []
    for a in t.args:
        ctx, parts = decompose(a, defined, include_variables)
        args.append(ctx)
        found.extend(parts)
    return App(t.symbol, tuple(args)), found


def plug(context: Term, fillers: Iterable[Term]) -> Term:
    fillers = iter(fillers)

    def fill(c: Term) -> Term:
        if c == HOLE:
            return next(fillers)
        if isinstance(c, Var):
            return c
        return App(c.symbol, tuple(fill(a) for a in c.args))

    return fill(context)


class CompoundRegistry:
    """Hands out compound symbols c_1, c_2, ... in request order, skipping taken names."""

    def __init__(self, taken: Iterable[str] = ()):
        self.taken = set(taken)
        self.counter = 0
        self.symbols: list[Symbol] = []

    def fresh(self, arity: int) -> Symbol:
        self.counter += 1
        name = f"c_{self.counter}"
        while name in self.taken:
            name += "'"
        self.taken.add(name)
        symbol = Symbol(name, arity, COMPOUND)
        self.symbols.append(symbol)
        return symbol


def com(ts: list[Term], registry: CompoundRegistry) -> Term:
    if len(ts) == 1:
        return ts[0]
    return App(registry.fresh(len(ts)), tuple(ts))


@dataclass(frozen=True)
class DpProblem:
    pairs: tuple[Rule, ...]
    origin: Trs
    flavor: str                             # "WDP" | "WIDP" | "DP"
    compounds: tuple[Symbol, ...] = ()

    @property
    def offset(self) -> int:
        return len(self.origin.rules)

    @property
    def indices(self) -> range:
        return range(self.offset + 1, self.offset + len(self.pairs) + 1)

    def pair(self, index: int) -> Rule:
        if index not in self.indices:
            raise IndexError(f"no pair {index}")
        return self.pairs[index - self.offset - 1]

    def rules(self, indices: Iterable[int]) -> list[Rule]:
        return [self.pair(i) for i in sorted(indices)]

    @cached_property
    def sharped(self) -> frozenset[Symbol]:
        return frozenset(p.lhs.symbol for p in self.pairs)

    def usable_rules(self, indices: Iterable[int] | None = None) -> list[int]:
        selected = self.pairs if indices is None else self.rules(indices)
        return usable_rules(self.origin, [p.rhs for p in selected])

    def combined(self, indices: Iterable[int] | None = None) -> Trs:
        """The system P ∪ U(P) for the selected pairs."""
        selected = list(self.pairs) if indices is None else self.rules(indices)
        used = [self.origin.rule(k) for k in self.usable_rules(indices)]
        return Trs.from_rules(selected + used)

    def format(self) -> list[str]:
        return [f"{i}: {format_term(p.lhs)} -> {format_term(p.rhs)}" for i, p in zip(self.indices, self.pairs)]


def _weak_pairs(trs: Trs, include_variables: bool, flavor: str) -> DpProblem:
    registry = CompoundRegistry(trs.signature)
    pairs = []
    for rule in trs.rules:
        _, parts = decompose(rule.rhs, trs.defined, include_variables)
        pairs.append(Rule(sharp(rule.lhs), com([sharp(u) for u in parts], registry)))
    return DpProblem(tuple(pairs), trs, flavor, tuple(registry.symbols))


def weak_dependency_pairs(trs: Trs) -> DpProblem:
    return _weak_pairs(trs, True, WDP)


def weak_innermost_dependency_pairs(trs: Trs) -> DpProblem:
    return _weak_pairs(trs, False, WIDP)


def standard_dependency_pairs(trs: Trs) -> DpProblem:
    pairs: list[Rule] = []
    for rule in trs.rules:
        proper = {u for p, u in subterms(rule.lhs) if p}
        for _, u in subterms(rule.rhs):
            if isinstance(u, App) and u.symbol in trs.defined and u not in proper:
                pair = Rule(sharp(rule.lhs), sharp(u))
                if pair not in pairs:
                    pairs.append(pair)
    return DpProblem(tuple(pairs), trs, DP)


def dp_problem(trs: Trs, mode: str) -> DpProblem:
    if mode == INNERMOST:
        return weak_innermost_dependency_pairs(trs)
    return weak_dependency_pairs(trs)


def usable_rules(trs: Trs, roots: Iterable[Term]) -> list[int]:
    """Indices of the rules of every defined symbol reachable from the symbols of `roots`."""
    depends: dict[Symbol, set[Symbol]] = {}
    for rule in trs.rules:
        depends.setdefault(rule.lhs.symbol, set()).update(
            g for g in function_symbols(rule.rhs) if g in trs.defined)
    reached: set[Symbol] = set()
    todo = [f for t in roots for f in function_symbols(t) if f in trs.defined]
    while todo:
        f = todo.pop()
        if f in reached:
            continue
        reached.add(f)
        todo.extend(depends.get(f, ()))
    return [k for k, rule in enumerate(trs.rules, 1) if rule.lhs.symbol in reached]
