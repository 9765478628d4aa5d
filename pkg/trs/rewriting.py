from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from trs.parsing import FULL, INNERMOST, Trs
from trs.replacement_map import ReplacementMap, mu_positions
from trs.term import App, Position, Term, Var, match, replace_at, substitute, subterms

Step = tuple[Position, int, Term]


class RelativeBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class StepMode:
    strategy: str = FULL                               # "full" | "innermost"
    replacement_map: ReplacementMap | None = None      # restricts redex positions to Pos_mu

    def __post_init__(self):
        if self.strategy not in (FULL, INNERMOST):
            raise ValueError(f"unknown rewrite strategy {self.strategy!r}")

    @property
    def innermost(self) -> bool:
        return self.strategy == INNERMOST


FULL_MODE = StepMode(FULL)
INNERMOST_MODE = StepMode(INNERMOST)


@dataclass(frozen=True)
class RelativeProblem:
    strict: Trs
    weak: Trs

    @cached_property
    def combined(self) -> Trs:
        return Trs.from_rules(self.strict.rules + self.weak.rules)


class Rewriter:
    """One-step rewriting with a per-instance normal form cache."""

    def __init__(self, trs: Trs, mode: StepMode = FULL_MODE, normal_wrt: Trs | None = None):
        self.trs = trs
        self.mode = mode
        self.normal_wrt = normal_wrt or trs
        self._normal: dict[Term, bool] = {}

    def is_normal(self, t: Term) -> bool:
        stack = [t]
        while stack:
            u = stack[-1]
            if u in self._normal:
                stack.pop()
                continue
            if isinstance(u, Var):
                self._normal[u] = True
                stack.pop()
                continue
            pending = [a for a in u.args if a not in self._normal]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            self._normal[u] = all(self._normal[a] for a in u.args) and not self._matches_at_root(u)
        return self._normal[t]

    def _matches_at_root(self, t: App) -> bool:
        for _, rule in self.normal_wrt.rules_by_root.get(t.symbol, ()):
            if match(rule.lhs, t) is not None:
                return True
        return False

    def reducts(self, t: Term) -> set[Step]:
        allowed = None
        if self.mode.replacement_map is not None:
            allowed = mu_positions(self.mode.replacement_map, t)
        steps: set[Step] = set()
        for p, u in subterms(t):
            if isinstance(u, Var) or (allowed is not None and p not in allowed):
                continue
            candidates = self.trs.rules_by_root.get(u.symbol)
            if not candidates:
                continue
            if self.mode.innermost and not all(self.is_normal(a) for a in u.args):
                continue
            for k, rule in candidates:
                sigma = match(rule.lhs, u)
                if sigma is not None:
                    steps.add((p, k, replace_at(t, p, substitute(rule.rhs, sigma))))
        return steps

    def successors(self, t: Term) -> set[Term]:
        return {v for _, _, v in self.reducts(t)}


def reducts(t: Term, trs: Trs, mode: StepMode = FULL_MODE) -> set[Step]:
    return Rewriter(trs, mode).reducts(t)


def is_normal_form(t: Term, trs: Trs) -> bool:
    return Rewriter(trs).is_normal(t)


class RelativeRewriter:
    """Successors of ->_{R/S}; innermost uses arguments normal with respect to R and S."""

    def __init__(self, prob: RelativeProblem, mode: StepMode = FULL_MODE, budget: int = 100_000):
        nf = prob.combined if mode.innermost else None
        self.strict = Rewriter(prob.strict, mode, nf)
        self.weak = Rewriter(prob.weak, mode, nf) if prob.weak.rules else None
        self.budget = budget

    def weak_closure(self, starts: set[Term]) -> set[Term]:
        if self.weak is None:
            return set(starts)
        seen = set(starts)
        queue = deque(starts)
        while queue:
            u = queue.popleft()
            for v in self.weak.successors(u):
                if v not in seen:
                    seen.add(v)
                    if len(seen) > self.budget:
                        raise RelativeBudgetExceeded("relative closure budget exceeded")
                    queue.append(v)
        return seen

    def successors(self, t: Term) -> set[Term]:
        middle = set()
        for u in self.weak_closure({t}):
            middle |= self.strict.successors(u)
        return self.weak_closure(middle)


def relative_reducts(t: Term, prob: RelativeProblem, mode: StepMode = FULL_MODE,
                     budget: int = 100_000) -> set[Term]:
    return RelativeRewriter(prob, mode, budget).successors(t)
