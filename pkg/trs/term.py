from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Mapping

PLAIN = "plain"
SHARPED = "sharped"
COMPOUND = "compound"

Position = tuple[int, ...]
EPSILON: Position = ()


class PositionError(ValueError):
    pass


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    kind: str = PLAIN                      # "plain" | "sharped" | "compound"
    origin: Symbol | None = None           # plain symbol a sharped symbol was marked from

    def __post_init__(self):
        if not self.name:
            raise ValueError("symbol name must be nonempty")
        if self.arity < 0:
            raise ValueError("symbol arity must be nonnegative")
        if self.kind == SHARPED and (self.origin is None or self.origin.arity != self.arity):
            raise ValueError("sharped symbol needs an origin of equal arity")

    def __call__(self, *args: Term) -> App:
        return App(self, tuple(args))

    def __str__(self):
        return self.name


def sharp_symbol(f: Symbol) -> Symbol:
    if f.kind == SHARPED:
        return f
    return Symbol(f.name + "#", f.arity, SHARPED, f)


class Term:
    __slots__ = ()


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str
    serial: int = 0                        # 0 for parsed variables, > 0 for fresh ones

    def __str__(self):
        return self.name if self.serial == 0 else f"{self.name}_{self.serial}"


@dataclass(frozen=True, eq=True)
class App(Term):
    symbol: Symbol
    args: tuple[Term, ...] = ()
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.args) != self.symbol.arity:
            raise ValueError(f"arity mismatch: {self.symbol.name} expects {self.symbol.arity} arguments")
        object.__setattr__(self, "_hash", hash((self.symbol, self.args)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        todo = [(self, other)]
        while todo:
            a, b = todo.pop()
            if a is b:
                continue
            if not isinstance(a, App) or not isinstance(b, App):
                if isinstance(a, App) or isinstance(b, App) or a != b:
                    return False
                continue
            if a._hash != b._hash or a.symbol != b.symbol:
                return False
            todo.extend(zip(a.args, b.args))
        return True

    def __str__(self):
        return format_term(self)


Substitution = dict[Var, Term]

_fresh_counter = itertools.count(1)


def fresh_var(base: str = "z") -> Var:
    return Var(base, next(_fresh_counter))


def reset_fresh() -> None:
    """Restart the fresh-name counter; called once per analysis run."""
    global _fresh_counter
    _fresh_counter = itertools.count(1)


def format_term(t: Term, explicit_constants: bool = False) -> str:
    if isinstance(t, Var):
        return str(t)
    if not t.args:
        return f"{t.symbol.name}()" if explicit_constants else t.symbol.name
    inner = ",".join(format_term(a, explicit_constants) for a in t.args)
    return f"{t.symbol.name}({inner})"


def size(t: Term) -> int:
    count, stack = 0, [t]
    while stack:
        u = stack.pop()
        count += 1
        if isinstance(u, App):
            stack.extend(u.args)
    return count


def subterms(t: Term, prefix: Position = EPSILON) -> Iterator[tuple[Position, Term]]:
    """Yield (position, subterm) pairs in pre-order."""
    stack = [(prefix, t)]
    while stack:
        p, u = stack.pop()
        yield p, u
        if isinstance(u, App):
            for i in range(len(u.args), 0, -1):
                stack.append((p + (i,), u.args[i - 1]))


def positions(t: Term) -> list[Position]:
    return [p for p, _ in subterms(t)]


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if not isinstance(t, App) or not 1 <= i <= len(t.args):
            raise PositionError("position out of range")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Position, u: Term) -> Term:
    spine = []
    for i in p:
        if not isinstance(t, App) or not 1 <= i <= len(t.args):
            raise PositionError("position out of range")
        spine.append((t, i))
        t = t.args[i - 1]
    for parent, i in reversed(spine):
        args = list(parent.args)
        args[i - 1] = u
        u = App(parent.symbol, tuple(args))
    return u


def variables(t: Term) -> list[Var]:
    """Distinct variables in order of first occurrence."""
    seen: dict[Var, None] = {}
    for _, u in subterms(t):
        if isinstance(u, Var):
            seen.setdefault(u)
    return list(seen)


def variable_counts(t: Term) -> Counter:
    return Counter(u for _, u in subterms(t) if isinstance(u, Var))


def function_symbols(t: Term) -> set[Symbol]:
    return {u.symbol for _, u in subterms(t) if isinstance(u, App)}


def is_ground(t: Term) -> bool:
    return not variables(t)


def occurs(x: Var, t: Term) -> bool:
    return any(u == x for _, u in subterms(t))


def substitute(t: Term, sigma: Mapping[Var, Term]) -> Term:
    if isinstance(t, Var):
        return sigma.get(t, t)
    # post-order rebuild; unchanged subterms are shared
    done: list[Term] = []
    stack: list[tuple[Term, bool]] = [(t, False)]
    while stack:
        u, expanded = stack.pop()
        if isinstance(u, Var):
            done.append(sigma.get(u, u))
        elif not u.args:
            done.append(u)
        elif expanded:
            n = len(u.args)
            args = tuple(done[-n:])
            del done[-n:]
            same = all(a is b for a, b in zip(args, u.args))
            done.append(u if same else App(u.symbol, args))
        else:
            stack.append((u, True))
            stack.extend((a, False) for a in reversed(u.args))
    return done[0]


def compose(sigma: Mapping[Var, Term], tau: Mapping[Var, Term]) -> Substitution:
    """The substitution t -> (t sigma) tau."""
    result: Substitution = {x: substitute(u, tau) for x, u in sigma.items()}
    for x, u in tau.items():
        result.setdefault(x, u)
    return result


def match(pattern: Term, subject: Term) -> Substitution | None:
    sigma: Substitution = {}
    todo = [(pattern, subject)]
    while todo:
        p, s = todo.pop()
        if isinstance(p, Var):
            bound = sigma.get(p)
            if bound is None:
                sigma[p] = s
            elif bound != s:
                return None
            continue
        if not isinstance(s, App) or s.symbol != p.symbol:
            return None
        todo.extend(zip(p.args, s.args))
    return sigma


def unify(s: Term, t: Term) -> Substitution | None:
    """Most general unifier with occurs-check, or None."""
    unifier: Substitution = {}
    eqns = [(s, t)]
    while eqns:
        lhs, rhs = eqns.pop()
        if lhs == rhs:
            continue
        if isinstance(lhs, App) and isinstance(rhs, App):
            if lhs.symbol != rhs.symbol:
                return None
            eqns.extend(zip(lhs.args, rhs.args))
            continue
        if isinstance(lhs, App):
            lhs, rhs = rhs, lhs
        if occurs(lhs, rhs):
            return None
        binding = {lhs: rhs}
        eqns = [(substitute(a, binding), substitute(b, binding)) for a, b in eqns]
        for x, u in unifier.items():
            unifier[x] = substitute(u, binding)
        unifier[lhs] = rhs
    return unifier


def unifiable(s: Term, t: Term) -> bool:
    return unify(s, t) is not None


def rename_apart(t: Term, avoid: set[Var] | frozenset[Var] = frozenset()) -> Term:
    """Rename every variable of t to a fresh one; fresh names never meet `avoid`."""
    renaming = {}
    for x in variables(t):
        y = fresh_var(x.name)
        while y in avoid:
            y = fresh_var(x.name)
        renaming[x] = y
    return substitute(t, renaming)


def linearize(t: Term) -> Term:
    """Replace every variable occurrence by a distinct fresh variable."""
    if isinstance(t, Var):
        return fresh_var(t.name)
    return App(t.symbol, tuple(linearize(a) for a in t.args))
