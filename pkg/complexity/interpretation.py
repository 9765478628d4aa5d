from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

import torch

from trs.parsing import Rule, is_duplicating
from trs.replacement_map import ReplacementMap
from trs.term import App, Symbol, Term, Var, function_symbols, variables

STRICT = "strict"
WEAK = "weak"

ALL_SYMBOLS = "all-symbols"
CONSTRUCTORS_ONLY = "constructors-only"


class UninterpretedSymbolError(ValueError):
    pass


class DegreeError(ValueError):
    pass


def _matrix(value: Any, d: int) -> torch.Tensor:
    if isinstance(value, torch.Tensor):
        return value.to(torch.long)
    if isinstance(value, int):
        return value * torch.eye(d, dtype=torch.long)
    return torch.tensor(value, dtype=torch.long)


def _vector(value: Any, d: int) -> torch.Tensor:
    if isinstance(value, torch.Tensor):
        return value.to(torch.long)
    if isinstance(value, int):
        v = torch.zeros(d, dtype=torch.long)
        v[0] = value
        return v
    return torch.tensor(value, dtype=torch.long)


@dataclass(frozen=True)
class SymbolInterpretation:
    matrices: tuple[torch.Tensor, ...]
    constant: torch.Tensor


@dataclass
class MatrixInterpretation:
    dimension: int
    assignment: dict[Symbol, SymbolInterpretation]

    @classmethod
    def build(cls, dimension: int, spec: dict[Symbol, tuple[Iterable[Any], Any]]) -> MatrixInterpretation:
        """
        Build an interpretation from plain values.

        Args:
            dimension (int): d.
            spec (dict): symbol -> (matrices, constant). An int matrix k means k times the
                identity; an int constant k means (k, 0, ..., 0).
        """
        assignment = {}
        for f, (matrices, constant) in spec.items():
            mats = tuple(_matrix(m, dimension) for m in matrices)
            if len(mats) != f.arity:
                raise ValueError(f"{f.name} needs {f.arity} matrices, got {len(mats)}")
            assignment[f] = SymbolInterpretation(mats, _vector(constant, dimension))
        return cls(dimension, assignment)

    def __getitem__(self, f: Symbol) -> SymbolInterpretation:
        try:
            return self.assignment[f]
        except KeyError:
            raise UninterpretedSymbolError(f"uninterpreted symbol {f.name}") from None

    def __contains__(self, f: Symbol) -> bool:
        return f in self.assignment

    def symbols(self) -> list[Symbol]:
        return sorted(self.assignment, key=lambda f: f.name)

    def eye(self) -> torch.Tensor:
        return torch.eye(self.dimension, dtype=torch.long)

    def zeros(self) -> torch.Tensor:
        return torch.zeros(self.dimension, dtype=torch.long)

    def same_as(self, other: MatrixInterpretation) -> bool:
        if self.dimension != other.dimension or set(self.assignment) != set(other.assignment):
            return False
        for f, mine in self.assignment.items():
            theirs = other.assignment[f]
            if not torch.equal(mine.constant, theirs.constant):
                return False
            if not all(torch.equal(a, b) for a, b in zip(mine.matrices, theirs.matrices)):
                return False
        return True


@dataclass
class LinearForm:
    coefficients: dict[Var, torch.Tensor]
    constant: torch.Tensor


@dataclass(frozen=True)
class ShapeReport:
    is_tmi: bool
    is_rmi: bool
    is_sli: bool
    is_slmi: bool
    is_adequate: bool


def evaluate(A: MatrixInterpretation, t: Term, alpha: dict[Var, torch.Tensor] | None = None) -> torch.Tensor:
    """[t] under alpha; variables outside alpha evaluate to the zero vector."""
    if isinstance(t, Var):
        return alpha.get(t, A.zeros()) if alpha else A.zeros()
    f = A[t.symbol]
    value = f.constant.clone()
    for M, a in zip(f.matrices, t.args):
        value = value + M @ evaluate(A, a, alpha)
    return value


def linear_form(A: MatrixInterpretation, t: Term) -> LinearForm:
    if isinstance(t, Var):
        return LinearForm({t: A.eye()}, A.zeros())
    f = A[t.symbol]
    coefficients: dict[Var, torch.Tensor] = {}
    constant = f.constant.clone()
    for M, a in zip(f.matrices, t.args):
        inner = linear_form(A, a)
        for x, C in inner.coefficients.items():
            coefficients[x] = coefficients.get(x, torch.zeros_like(C)) + M @ C
        constant = constant + M @ inner.constant
    return LinearForm(coefficients, constant)


def orients(A: MatrixInterpretation, rule: Rule, flavor: str = STRICT) -> bool:
    """Absolute positiveness check of l > r (strict) or l >= r (weak)."""
    if not set(variables(rule.rhs)) <= set(variables(rule.lhs)):
        raise ValueError("free variable in right-hand side")
    left = linear_form(A, rule.lhs)
    right = linear_form(A, rule.rhs)
    for x, R in right.coefficients.items():
        if not bool((left.coefficients[x] >= R).all()):
            return False
    l, r = left.constant, right.constant
    if flavor == STRICT:
        return bool(l[0] > r[0]) and bool((l[1:] >= r[1:]).all())
    return bool((l >= r).all())


def is_mu_monotone(A: MatrixInterpretation, mu: ReplacementMap) -> bool:
    for f, i in mu:
        if f in A and int(A[f].matrices[i - 1][0, 0]) < 1:
            return False
    return True


def is_triangular(M: torch.Tensor) -> bool:
    return torch.equal(M, torch.triu(M)) and bool((torch.diagonal(M) <= 1).all())


def _all(A: MatrixInterpretation, symbols: Iterable[Symbol], check) -> bool:
    return all(check(M) for f in symbols if f in A for M in A[f].matrices)


def classify(A: MatrixInterpretation, constructors: Iterable[Symbol], compounds: Iterable[Symbol],
             mu: ReplacementMap) -> ShapeReport:
    eye = A.eye()
    unit = lambda M: torch.equal(M, eye)
    everything = list(A.assignment)
    is_slmi = _all(A, everything, unit)
    compounds = list(compounds)
    adequate = _all(A, compounds, unit) and is_mu_monotone(
        A, ReplacementMap(frozenset(e for e in mu.entries if e[0] in compounds)))
    return ShapeReport(
        is_tmi=_all(A, everything, is_triangular),
        is_rmi=_all(A, constructors, is_triangular),
        is_sli=A.dimension == 1 and is_slmi,
        is_slmi=is_slmi,
        is_adequate=adequate,
    )


def degree(A: MatrixInterpretation, scope: str = CONSTRUCTORS_ONLY,
           constructors: Iterable[Symbol] | None = None) -> int:
    """Number of ones on the diagonal of the component-wise maximum of the scoped matrices."""
    if scope == CONSTRUCTORS_ONLY:
        if constructors is None:
            raise ValueError("constructors-only scope needs the constructor set")
        scoped = [f for f in constructors if f in A]
    else:
        scoped = list(A.assignment)
    matrices = [M for f in scoped for M in A[f].matrices]
    if not matrices:
        return 0
    if not all(is_triangular(M) for M in matrices):
        raise DegreeError("degree undefined for non-triangular scope")
    top = torch.stack(matrices).amax(dim=0)
    if scope == CONSTRUCTORS_ONLY and torch.equal(top, A.eye()):
        return 1
    return int((torch.diagonal(top) == 1).sum())


def weight_gap_delta(A: MatrixInterpretation, pairs: Iterable[Rule]) -> int | None:
    """WG(A, pairs) when every rhs coefficient matrix is bounded by the lhs one, else None."""
    delta = 0
    for rule in pairs:
        left = linear_form(A, rule.lhs)
        right = linear_form(A, rule.rhs)
        for x, R in right.coefficients.items():
            L = left.coefficients.get(x, torch.zeros_like(R))
            if bool((R > L).any()):
                return None
        delta = max(delta, int(right.constant[0] - left.constant[0]))
    return delta


def nonduplicating_slmi_gap(A: MatrixInterpretation, strict_part: Iterable[Rule]) -> int | None:
    rules = list(strict_part)
    if is_duplicating(rules):
        return None
    eye = A.eye()
    used = set().union(*(function_symbols(r.lhs) | function_symbols(r.rhs) for r in rules)) if rules else set()
    if not all(torch.equal(M, eye) for f in used for M in A[f].matrices):
        return None
    gap = 0
    for rule in rules:
        gap = max(gap, int(evaluate(A, rule.rhs)[0] - evaluate(A, rule.lhs)[0]))
    return gap


def _format_matrix(M: torch.Tensor) -> str:
    return "[" + ",".join("[" + ",".join(str(int(v)) for v in row) + "]" for row in M) + "]"


def format_interpretation(A: MatrixInterpretation) -> list[str]:
    lines = []
    for f in A.symbols():
        f_a = A[f]
        xs = ",".join(f"x{i}" for i in range(1, f.arity + 1))
        terms = [f"{_format_matrix(M)}*x{i}" for i, M in enumerate(f_a.matrices, 1)]
        terms.append("[" + ",".join(str(int(v)) for v in f_a.constant) + "]")
        lines.append(f"{f.name}({xs}) = {' + '.join(terms)}")
    return lines


def interpretation_to_json(A: MatrixInterpretation) -> dict:
    return {
        "dimension": A.dimension,
        "symbols": {
            f.name: {
                "arity": f.arity,
                "matrices": [M.tolist() for M in A[f].matrices],
                "constant": A[f].constant.tolist(),
            }
            for f in A.symbols()
        },
    }


def interpretation_from_json(data: dict, table: dict[str, Symbol]) -> MatrixInterpretation:
    d = int(data["dimension"])
    spec = {}
    for name, entry in data["symbols"].items():
        if name not in table:
            raise ValueError(f"unknown symbol {name} in interpretation")
        f = table[name]
        if len(entry["matrices"]) != f.arity or len(entry["constant"]) != d:
            raise ValueError(f"malformed interpretation of {name}")
        spec[f] = (entry["matrices"], entry["constant"])
    A = MatrixInterpretation.build(d, spec)
    for f_a in A.assignment.values():
        if any(M.shape != (d, d) or bool((M < 0).any()) for M in f_a.matrices) or bool((f_a.constant < 0).any()):
            raise ValueError("interpretation entries must be natural d x d matrices")
    return A
