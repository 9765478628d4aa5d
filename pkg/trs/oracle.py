from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable

from trs.parsing import Trs
from trs.rewriting import FULL_MODE, RelativeProblem, RelativeRewriter, Rewriter, StepMode
from trs.term import App, Position, Symbol, Term, format_term, size, subterms


@dataclass(frozen=True)
class Diverged:
    fuel: int

    def __str__(self):
        return f"diverged({self.fuel})"


@dataclass(frozen=True)
class ComplexitySample:
    n: int
    value: int
    diverged: bool = False


@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    constant: int
    failures: tuple[int, ...] = ()


class HeightOracle:
    """Brute-force derivation heights; the memo table lives as long as the instance."""

    def __init__(self, system: Trs | RelativeProblem, mode: StepMode = FULL_MODE,
                 fuel: int = 100_000, budget: int = 100_000):
        if fuel <= 0:
            raise ValueError("fuel must be positive")
        if isinstance(system, RelativeProblem):
            self.successors = RelativeRewriter(system, mode, budget).successors
        else:
            self.successors = Rewriter(system, mode).successors
        self.fuel = fuel
        self.memo: dict[Term, int] = {}

    def height(self, t: Term) -> int | Diverged:
        if t in self.memo:
            return self.memo[t]
        # frames: [term, successor iterator, best height so far]
        stack = [[t, iter(self.successors(t)), 0]]
        on_path = {t}
        while stack:
            frame = stack[-1]
            pushed = False
            for v in frame[1]:
                known = self.memo.get(v)
                if known is not None:
                    frame[2] = max(frame[2], known + 1)
                    if frame[2] > self.fuel:
                        return Diverged(self.fuel)
                    continue
                if v in on_path or len(stack) >= self.fuel:
                    return Diverged(self.fuel)
                stack.append([v, iter(self.successors(v)), 0])
                on_path.add(v)
                pushed = True
                break
            if pushed:
                continue
            stack.pop()
            on_path.discard(frame[0])
            self.memo[frame[0]] = frame[2]
            if stack:
                stack[-1][2] = max(stack[-1][2], frame[2] + 1)
                if stack[-1][2] > self.fuel:
                    return Diverged(self.fuel)
        return self.memo[t]


def derivation_height(t: Term, system: Trs | RelativeProblem, mode: StepMode = FULL_MODE,
                      fuel: int = 100_000) -> int | Diverged:
    """
    Length of the longest derivation starting at t.

    Args:
        t (Term): start term.
        system (Trs | RelativeProblem): rules; for a relative problem only strict steps count.
        mode (StepMode, optional): full or innermost, optionally restricted by a replacement map.
        fuel (int, optional): longest path explored before giving up. Defaults to 100000.

    Returns:
        int | Diverged: the height, or Diverged when a cycle or a path longer than fuel is met.
    """
    return HeightOracle(system, mode, fuel).height(t)


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total < parts:
        return
    for cut in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cut + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def _terms_by_size(symbols: Iterable[Symbol], n: int) -> dict[int, list[Term]]:
    symbols = sorted(symbols, key=lambda f: f.name)
    by_size: dict[int, list[Term]] = {k: [] for k in range(1, n + 1)}
    for k in range(1, n + 1):
        for f in symbols:
            if f.arity == 0:
                if k == 1:
                    by_size[1].append(App(f))
                continue
            for split in _compositions(k - 1, f.arity):
                for args in itertools.product(*(by_size[s] for s in split)):
                    by_size[k].append(App(f, tuple(args)))
    return by_size


def _order_key(t: Term) -> tuple:
    return size(t), tuple(u.symbol.name for _, u in subterms(t) if isinstance(u, App))


def basic_terms_up_to(trs: Trs, n: int) -> list[Term]:
    constructor_terms = _terms_by_size(trs.constructors, n)
    result = []
    for f in sorted(trs.defined, key=lambda f: f.name):
        for total in range(f.arity, n):
            for split in _compositions(total, f.arity):
                for args in itertools.product(*(constructor_terms[s] for s in split)):
                    result.append(App(f, tuple(args)))
    return sorted(result, key=_order_key)


def ground_terms_up_to(trs: Trs, n: int) -> list[Term]:
    by_size = _terms_by_size(trs.signature.values(), n)
    return sorted((t for k in by_size for t in by_size[k]), key=_order_key)


def _samples(terms: list[Term], oracle: HeightOracle, n_max: int) -> list[ComplexitySample]:
    best, diverged, table = 0, False, []
    by_size: dict[int, list[Term]] = {}
    for t in terms:
        by_size.setdefault(size(t), []).append(t)
    for n in range(1, n_max + 1):
        for t in by_size.get(n, ()):
            h = oracle.height(t)
            if isinstance(h, Diverged):
                diverged = True
            else:
                best = max(best, h)
        table.append(ComplexitySample(n, best, diverged))
    return table


def runtime_complexity_samples(trs: Trs, mode: StepMode = FULL_MODE, n_max: int = 8,
                               fuel: int = 100_000) -> list[ComplexitySample]:
    """rc(n) for n = 1..n_max over ground basic terms."""
    return _samples(basic_terms_up_to(trs, n_max), HeightOracle(trs, mode, fuel), n_max)


def derivational_complexity_samples(trs: Trs, mode: StepMode = FULL_MODE, n_max: int = 6,
                                    fuel: int = 100_000) -> list[ComplexitySample]:
    return _samples(ground_terms_up_to(trs, n_max), HeightOracle(trs, mode, fuel), n_max)


def check_polynomial_bound(samples: list[ComplexitySample], degree: int, fit_n: int = 6) -> BoundCheck:
    """Fit C on n <= fit_n and check value(n) <= C * n^degree on every sample."""
    if any(s.diverged for s in samples):
        return BoundCheck(False, 0, tuple(s.n for s in samples if s.diverged))
    constant = 1
    for s in samples:
        if s.n <= fit_n:
            constant = max(constant, math.ceil(s.value / max(1, s.n) ** degree))
    failures = tuple(s.n for s in samples if s.value > constant * max(1, s.n) ** degree)
    return BoundCheck(not failures, constant, failures)


def sample_derivation(t: Term, trs: Trs, mode: StepMode = FULL_MODE, steps: int = 8,
                      rng: random.Random | None = None) -> list[tuple[Term, Position, int]]:
    """Random walk of at most `steps` steps; returns (source term, redex position, rule index)."""
    rng = rng or random.Random(0)
    rewriter = Rewriter(trs, mode)
    walk = []
    for _ in range(steps):
        options = sorted(rewriter.reducts(t), key=lambda s: (s[0], s[1], format_term(s[2])))
        if not options:
            break
        p, k, v = rng.choice(options)
        walk.append((t, p, k))
        t = v
    return walk
