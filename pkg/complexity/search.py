from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import torch

from complexity.constraint import (DomainStore, Poly, PolyConstraint, poly_add, poly_const, poly_mul,
                                   poly_sub, poly_var, propagate)
from complexity.interpretation import (CONSTRUCTORS_ONLY, STRICT, WEAK, MatrixInterpretation,
                                       SymbolInterpretation, degree, is_mu_monotone, is_triangular, orients,
                                       weight_gap_delta)
from trs.parsing import Rule
from trs.replacement_map import ReplacementMap
from trs.term import Symbol, Term, Var, function_symbols

FREE = "free"
TRIANGULAR = "triangular"
UNIT = "unit"


@dataclass(frozen=True)
class SearchProblem:
    dimension: int
    coeff_bound: int
    mu: ReplacementMap
    strict_rules: tuple[Rule, ...]
    weak_rules: tuple[Rule, ...] = ()
    shapes: dict[Symbol, str] = field(default_factory=dict)   # "free" | "triangular" | "unit"
    degree_cap: int | None = None
    constructors: frozenset[Symbol] = frozenset()            # degree scope
    weight_gap_rules: tuple[Rule, ...] = ()                   # need R_x <= L_x entry-wise

    def __post_init__(self):
        if self.dimension < 1 or self.coeff_bound < 1:
            raise ValueError("search needs d >= 1 and B >= 1")
        if set(self.strict_rules) & set(self.weak_rules):
            raise ValueError("a rule cannot be both strict and weak")
        for rule in self.rules():
            for f in function_symbols(rule.lhs) | function_symbols(rule.rhs):
                if f not in self.shapes:
                    raise ValueError(f"no shape for symbol {f.name}")

    def rules(self) -> list[Rule]:
        return list(self.strict_rules) + list(self.weak_rules) + list(self.weight_gap_rules)

    def symbol_order(self) -> list[Symbol]:
        """Defined symbols first, then constructors, each by name."""
        return sorted(self.shapes, key=lambda f: (f in self.constructors, f.name, f.kind))


@dataclass
class SearchBudget:
    max_nodes: int = 200_000                  # assignments tried before giving up
    deadline: float | None = None             # time.monotonic() value

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() >= self.deadline


@dataclass(frozen=True)
class SearchStats:
    nodes: int
    seconds: float
    budget_hit: bool = False


@dataclass(frozen=True)
class Found:
    interpretation: MatrixInterpretation
    stats: SearchStats


@dataclass(frozen=True)
class Exhausted:
    stats: SearchStats


SearchOutcome = Found | Exhausted


class _BudgetExceeded(Exception):
    pass


class _Encoding:
    """Entry-level unknowns of every shaped symbol plus the polynomial constraints over them."""

    def __init__(self, p: SearchProblem):
        self.p = p
        d, B = p.dimension, p.coeff_bound
        self.lo: list[int] = []
        self.hi: list[int] = []
        self.slots: dict[Symbol, tuple[list[list[list[Poly]]], list[Poly]]] = {}
        for f in p.symbol_order():
            shape = p.shapes[f]
            mats = []
            for i in range(1, f.arity + 1):
                monotone = (f, i) in p.mu
                rows = []
                for a in range(d):
                    row = []
                    for b in range(d):
                        if shape == UNIT or (shape == TRIANGULAR and a > b):
                            row.append(poly_const(1 if a == b and shape == UNIT else 0))
                            continue
                        top = 1 if shape == TRIANGULAR and a == b else B
                        row.append(poly_var(self._new(1 if monotone and a == b == 0 else 0, top)))
                    rows.append(row)
                mats.append(rows)
            const = [poly_var(self._new(0, B)) for _ in range(d)]
            self.slots[f] = (mats, const)
        self.constraints: list[PolyConstraint] = []
        self.unsat = False
        for rule in p.strict_rules:
            self._orientation(rule, strict=True)
        for rule in p.weak_rules:
            self._orientation(rule, strict=False)
        for rule in p.weight_gap_rules:
            self._coefficients(rule, "gap")
        # diagonal entries of constructor matrices, per component, for the degree cap
        self.diagonal: list[list[Poly]] = [[] for _ in range(d)]
        for f in p.constructors & set(self.slots):
            for M in self.slots[f][0]:
                for a in range(d):
                    self.diagonal[a].append(M[a][a])
        if p.degree_cap == 0:
            for entries in self.diagonal:
                for entry in entries:
                    for m in entry:
                        if not m:
                            self.unsat = True
                            continue
                        for v in m:
                            self.hi[v] = 0
                            if self.lo[v] > 0:
                                self.unsat = True
        self.watchers: dict[int, list[int]] = {}
        for k, c in enumerate(self.constraints):
            for v in c.variables:
                self.watchers.setdefault(v, []).append(k)

    def _new(self, lo: int, hi: int) -> int:
        self.lo.append(lo)
        self.hi.append(hi)
        return len(self.lo) - 1

    def diagonal_variables(self) -> set[int]:
        return {v for entries in self.diagonal for entry in entries for m in entry for v in m}

    def within_cap(self, store: DomainStore) -> bool:
        """False once more diagonal components are forced to one than the degree cap allows."""
        cap = self.p.degree_cap
        if cap is None or cap == 0:
            return True

        def forced(entry: Poly) -> bool:
            total = 0
            for m, c in entry.items():
                for v in m:
                    c *= store.lo[v]
                total += c
            return total >= 1

        used = sum(1 for entries in self.diagonal if any(forced(e) for e in entries))
        # all components used can still be the identity, which counts once
        return used <= cap or used == self.p.dimension

    def _mat_mul(self, A: list[list[Poly]], B: list[list[Poly]]) -> list[list[Poly]]:
        d = self.p.dimension
        out = []
        for a in range(d):
            row = []
            for b in range(d):
                acc: Poly = {}
                for k in range(d):
                    acc = poly_add(acc, poly_mul(A[a][k], B[k][b]))
                row.append(acc)
            out.append(row)
        return out

    def _mat_vec(self, A: list[list[Poly]], v: list[Poly]) -> list[Poly]:
        out = []
        for row in A:
            acc: Poly = {}
            for entry, x in zip(row, v):
                acc = poly_add(acc, poly_mul(entry, x))
            out.append(acc)
        return out

    def linear_form(self, t: Term) -> tuple[dict[Var, list[list[Poly]]], list[Poly]]:
        d = self.p.dimension
        if isinstance(t, Var):
            return {t: [[poly_const(1 if a == b else 0) for b in range(d)] for a in range(d)]}, [{} for _ in range(d)]
        mats, const = self.slots[t.symbol]
        coefficients: dict[Var, list[list[Poly]]] = {}
        constant = list(const)
        for M, arg in zip(mats, t.args):
            inner_coeffs, inner_const = self.linear_form(arg)
            for x, C in inner_coeffs.items():
                product = self._mat_mul(M, C)
                if x in coefficients:
                    coefficients[x] = [[poly_add(u, w) for u, w in zip(r1, r2)]
                                       for r1, r2 in zip(coefficients[x], product)]
                else:
                    coefficients[x] = product
            constant = [poly_add(u, w) for u, w in zip(constant, self._mat_vec(M, inner_const))]
        return coefficients, constant

    def _add(self, poly: Poly, bound: int, label: str) -> None:
        c = PolyConstraint(poly, bound, label)
        if not c.variables:
            if c.bound > 0:
                self.unsat = True
            return
        if not c.is_trivial():
            self.constraints.append(c)

    def _coefficients(self, rule: Rule, label: str) -> tuple[list[Poly], list[Poly]]:
        d = self.p.dimension
        left_c, left_v = self.linear_form(rule.lhs)
        right_c, right_v = self.linear_form(rule.rhs)
        for x, R in right_c.items():
            L = left_c[x]
            for a in range(d):
                for b in range(d):
                    self._add(poly_sub(L[a][b], R[a][b]), 0, f"{label} {rule} coeff {x}[{a},{b}]")
        return left_v, right_v

    def _orientation(self, rule: Rule, strict: bool) -> None:
        left_v, right_v = self._coefficients(rule, "strict" if strict else "weak")
        for a in range(self.p.dimension):
            bound = 1 if strict and a == 0 else 0
            self._add(poly_sub(left_v[a], right_v[a]), bound, f"{rule} constant[{a}]")

    def decode(self, values: list[int]) -> MatrixInterpretation:
        def value(poly: Poly) -> int:
            total = 0
            for m, c in poly.items():
                for v in m:
                    c *= values[v]
                total += c
            return total

        assignment = {}
        for f, (mats, const) in self.slots.items():
            matrices = tuple(torch.tensor([[value(e) for e in row] for row in M], dtype=torch.long) for M in mats)
            assignment[f] = SymbolInterpretation(matrices, torch.tensor([value(e) for e in const], dtype=torch.long))
        return MatrixInterpretation(self.p.dimension, assignment)


class _Solver:
    def __init__(self, encoding: _Encoding, budget: SearchBudget, accept: Callable[[MatrixInterpretation], bool]):
        self.enc = encoding
        self.budget = budget
        self.accept = accept
        self.nodes = 0
        branching = set(encoding.watchers)
        if encoding.p.degree_cap is not None:
            branching |= encoding.diagonal_variables()
        self.branching = sorted(branching)

    def choose(self, store: DomainStore) -> int | None:
        best, best_size = None, 0
        for v in self.branching:
            s = store.size(v)
            if s > 1 and (best is None or s < best_size):
                best, best_size = v, s
        return best

    def dfs(self, store: DomainStore) -> MatrixInterpretation | None:
        v = self.choose(store)
        if v is None:
            # unbranched entries take their lower bound
            candidate = self.enc.decode(list(store.lo))
            return candidate if self.accept(candidate) else None
        for value in range(store.lo[v], store.hi[v] + 1):
            self.nodes += 1
            if self.nodes > self.budget.max_nodes or (self.nodes % 256 == 0 and self.budget.expired()):
                raise _BudgetExceeded
            child = store.copy()
            child.lo[v] = child.hi[v] = value
            watched = set(self.enc.watchers.get(v, ()))
            if propagate(child, self.enc.constraints, self.enc.watchers, watched) and self.enc.within_cap(child):
                found = self.dfs(child)
                if found is not None:
                    return found
        return None

    def solve(self) -> MatrixInterpretation | None:
        store = DomainStore(list(self.enc.lo), list(self.enc.hi))
        if self.enc.unsat:
            return None
        everything = set(range(len(self.enc.constraints)))
        if not propagate(store, self.enc.constraints, self.enc.watchers, everything):
            return None
        if not self.enc.within_cap(store):
            return None
        return self.dfs(store)


def verify(A: MatrixInterpretation, p: SearchProblem) -> bool:
    """Re-check every constraint of p from scratch with the interpretation checkers."""
    if A.dimension != p.dimension:
        return False
    eye = A.eye()
    for f, shape in p.shapes.items():
        if f not in A:
            return False
        f_a = A[f]
        entries = list(f_a.matrices) + [f_a.constant]
        if len(f_a.matrices) != f.arity or any(bool((e < 0).any()) or bool((e > p.coeff_bound).any())
                                               for e in entries):
            return False
        if shape == UNIT and not all(torch.equal(M, eye) for M in f_a.matrices):
            return False
        if shape == TRIANGULAR and not all(is_triangular(M) for M in f_a.matrices):
            return False
    if not all(orients(A, r, STRICT) for r in p.strict_rules):
        return False
    if not all(orients(A, r, WEAK) for r in p.weak_rules):
        return False
    if not is_mu_monotone(A, p.mu):
        return False
    if p.weight_gap_rules and weight_gap_delta(A, p.weight_gap_rules) is None:
        return False
    if p.degree_cap is not None and degree(A, CONSTRUCTORS_ONLY, p.constructors) > p.degree_cap:
        return False
    return True


def find_interpretation(p: SearchProblem, budget: SearchBudget | None = None) -> SearchOutcome:
    """
    Backtracking search for a matrix interpretation satisfying p.

    Args:
        p (SearchProblem): orientation, monotonicity, shape and degree constraints.
        budget (SearchBudget, optional): node and time limits.

    Returns:
        SearchOutcome: Found with a verified interpretation, or Exhausted with statistics.
    """
    budget = budget or SearchBudget()
    started = time.monotonic()
    encoding = _Encoding(p)
    solver = _Solver(encoding, budget, lambda A: verify(A, p))
    budget_hit = False
    try:
        found = solver.solve()
    except _BudgetExceeded:
        found, budget_hit = None, True
    stats = SearchStats(solver.nodes, time.monotonic() - started, budget_hit)
    logging.debug(f"search d={p.dimension} B={p.coeff_bound}: {stats.nodes} nodes, "
                  f"{len(encoding.constraints)} constraints, {stats.seconds:.2f}s")
    if found is None:
        return Exhausted(stats)
    return Found(found, stats)


def find_with_escalation(build: Callable[[int], SearchProblem], max_dim: int,
                         budget: SearchBudget | None = None) -> SearchOutcome:
    """Try dimensions 1..max_dim and return the first success."""
    outcome: SearchOutcome = Exhausted(SearchStats(0, 0.0))
    for d in range(1, max_dim + 1):
        if budget is not None and budget.expired():
            return Exhausted(SearchStats(0, 0.0, True))
        outcome = find_interpretation(build(d), budget)
        if isinstance(outcome, Found):
            return outcome
    return outcome


def shapes_for(symbols: Iterable[Symbol], constructors: Iterable[Symbol], compounds: Iterable[Symbol] = (),
               compound_shape: str = FREE, everything: str | None = None) -> dict[Symbol, str]:
    """Shape map: constructors triangular, compounds `compound_shape`, the rest free.

    `everything` overrides all of them (e.g. UNIT for strongly linear searches).
    """
    constructors, compounds = set(constructors), set(compounds)
    shapes = {}
    for f in symbols:
        if everything is not None:
            shapes[f] = everything
        elif f in constructors:
            shapes[f] = TRIANGULAR
        elif f in compounds:
            shapes[f] = compound_shape
        else:
            shapes[f] = FREE
    return shapes


def rule_symbols(rules: Iterable[Rule]) -> set[Symbol]:
    out: set[Symbol] = set()
    for r in rules:
        out |= function_symbols(r.lhs) | function_symbols(r.rhs)
    return out
