from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from trs.parsing import Rule, Trs
from trs.term import App, Position, Symbol, Term, Var, fresh_var, rename_apart, subterms, unifiable


@dataclass(frozen=True)
class ReplacementMap:
    entries: frozenset[tuple[Symbol, int]] = frozenset()

    def __post_init__(self):
        for f, i in self.entries:
            if not 1 <= i <= f.arity:
                raise ValueError(f"argument index {i} out of range for {f.name}/{f.arity}")

    @classmethod
    def of(cls, pairs: Iterable[tuple[Symbol, int]]) -> ReplacementMap:
        return cls(frozenset(pairs))

    def __call__(self, f: Symbol) -> frozenset[int]:
        return frozenset(i for g, i in self.entries if g == f)

    def __contains__(self, item: tuple[Symbol, int]) -> bool:
        return item in self.entries

    def __iter__(self) -> Iterator[tuple[Symbol, int]]:
        return iter(sorted(self.entries, key=lambda e: (e[0].name, e[1])))

    def __len__(self):
        return len(self.entries)

    def __le__(self, other: ReplacementMap) -> bool:
        return self.entries <= other.entries

    def __or__(self, other: ReplacementMap) -> ReplacementMap:
        return ReplacementMap(self.entries | other.entries)

    def symbols(self) -> list[Symbol]:
        return sorted({f for f, _ in self.entries}, key=lambda f: f.name)

    def format(self) -> list[str]:
        return [f"{f.name}: {{{','.join(str(i) for i in sorted(self(f)))}}}" for f in self.symbols()]


EMPTY_MAP = ReplacementMap()


def mu_positions(mu: ReplacementMap, t: Term) -> set[Position]:
    result: set[Position] = set()
    stack: list[tuple[Position, Term]] = [((), t)]
    while stack:
        p, u = stack.pop()
        result.add(p)
        if isinstance(u, App):
            for i in mu(u.symbol):
                stack.append((p + (i,), u.args[i - 1]))
    return result


def non_replacing_positions(mu: ReplacementMap, t: Term) -> set[Position]:
    replacing = mu_positions(mu, t)
    return {p for p, _ in subterms(t) if p not in replacing}


class _Capper:
    """mu_cap for one fixed left-hand side s, lhs renamings shared across calls."""

    def __init__(self, mu: ReplacementMap, trs: Trs, s: Term):
        npos = non_replacing_positions(mu, s)
        self.frozen = [u for p, u in subterms(s) if p in npos]
        self.lhss = [rename_apart(rule.lhs) for rule in trs.rules]

    def cap(self, t: Term) -> Term:
        if any(t == u for u in self.frozen):
            return t
        if isinstance(t, App):
            u = App(t.symbol, tuple(self.cap(a) for a in t.args))
            if not any(unifiable(u, l) for l in self.lhss):
                return u
        return fresh_var("y")


def mu_cap(mu: ReplacementMap, trs: Trs, s: Term, t: Term) -> Term:
    return _Capper(mu, trs, s).cap(t)


def _rule_contributions(mu: ReplacementMap, trs: Trs, rule: Rule) -> set[tuple[Symbol, int]]:
    capper = _Capper(mu, trs, rule.lhs)
    found = set()
    for _, u in subterms(rule.rhs):
        if isinstance(u, Var):
            continue
        for i, a in enumerate(u.args, 1):
            if capper.cap(a) != a:
                found.add((u.symbol, i))
    return found


def upsilon(trs: Trs, mu: ReplacementMap) -> ReplacementMap:
    entries: set[tuple[Symbol, int]] = set()
    for rule in trs.rules:
        entries |= _rule_contributions(mu, trs, rule)
    return ReplacementMap(frozenset(entries))


def innermost_usable_map(trs: Trs) -> ReplacementMap:
    return upsilon(trs, EMPTY_MAP)


def usable_map(trs: Trs) -> ReplacementMap:
    """Least fixed point of upsilon, by Kleene iteration from the empty map."""
    height = sum(f.arity for f in trs.signature.values()) + 1
    mu = EMPTY_MAP
    for _ in range(height + 1):
        nxt = upsilon(trs, mu)
        if nxt == mu:
            return mu
        mu = nxt
    raise RuntimeError("replacement map iteration did not stabilise")


def is_mu_replacing_term(mu: ReplacementMap, trs: Trs, t: Term) -> bool:
    """True iff every non-normal argument sits at an argument position allowed by mu."""
    from trs.rewriting import is_normal_form

    for _, u in subterms(t):
        if isinstance(u, Var):
            continue
        allowed = mu(u.symbol)
        for i, a in enumerate(u.args, 1):
            if i not in allowed and not is_normal_form(a, trs):
                return False
    return True


def map_for_mode(trs: Trs, mode: str) -> ReplacementMap:
    return innermost_usable_map(trs) if mode == "innermost" else usable_map(trs)
