from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

from certificate.certificate import (CERTIFIED_STRATEGIES, DIRECT, ROLE_COMPATIBLE, ROLE_DIRECT, ROLE_GAP,
                                     ROLE_PATH_GAP, ROLE_PATH_STEP, ROLE_RELATIVE, WDG, WDP_COMPATIBLE,
                                     WDP_WEIGHTGAP, Certificate, Witness, resolve_rule)
from complexity.dependency_pairs import DpProblem, dp_problem
from complexity.graph import congruence_graph, estimate_graph, maximal_source_paths, path_pairs
from complexity.interpretation import (CONSTRUCTORS_ONLY, STRICT, WEAK, DegreeError, UninterpretedSymbolError,
                                       classify, degree, is_mu_monotone, nonduplicating_slmi_gap, orients,
                                       weight_gap_delta)
from trs.parsing import FULL, INNERMOST, Trs
from trs.replacement_map import ReplacementMap, map_for_mode


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


class _Reject(Exception):
    pass


class _Checker:
    """Re-derives every side condition of a certificate from the system alone."""

    def __init__(self, trs: Trs, cert: Certificate):
        self.trs = trs
        self.cert = cert
        self.problem: DpProblem = dp_problem(trs, cert.mode)

    def require(self, condition: bool, reason: str) -> None:
        if not condition:
            raise _Reject(reason)

    def rules(self, indices: Iterable[int]) -> list:
        out = []
        for k in indices:
            try:
                out.append(resolve_rule(self.trs, self.problem, k))
            except IndexError:
                raise _Reject(f"unknown rule index {k}") from None
        return out

    def one(self, role: str, path: int | None = None, step: int | None = None) -> Witness:
        found = [w for w in self.cert.witnesses if w.role == role and w.path == path and w.step == step]
        self.require(len(found) == 1, f"expected one {role} witness" + (f" for path {path}" if path is not None else ""))
        return found[0]

    def witness(self, w: Witness, mu: ReplacementMap, strict: Iterable[int], weak: Iterable[int] = (),
                gap: Iterable[int] = (), adequate: bool = False) -> int:
        """Checks one interpretation and returns its degree."""
        label = w.role if w.path is None else f"{w.role} (path {w.path}" + (f", step {w.step})" if w.step else ")")
        self.require(set(w.strict) == set(strict), f"{label}: wrong strict rules")
        self.require(set(w.weak) == set(weak), f"{label}: wrong weak rules")
        self.require(set(w.gap) == set(gap), f"{label}: wrong weight-gap rules")
        self.require(w.mu.entries == mu.entries, f"{label}: replacement map differs from the usable map")
        A = w.interpretation
        report = classify(A, self.trs.constructors, self.problem.compounds, mu)
        self.require(report.is_rmi, f"{label}: constructor matrices are not triangular")
        self.require(is_mu_monotone(A, mu), f"{label}: not monotone on the replacing positions")
        if adequate:
            self.require(report.is_adequate, f"{label}: compound symbols are not strongly linear")
        for rule in self.rules(w.strict):
            self.require(orients(A, rule, STRICT), f"{label}: {rule} is not strictly decreasing")
        for rule in self.rules(w.weak):
            self.require(orients(A, rule, WEAK), f"{label}: {rule} is not weakly decreasing")
        if w.gap:
            pairs = self.rules(w.gap)
            delta = weight_gap_delta(A, pairs)
            self.require(delta is not None, f"{label}: weight gap not well-defined on the naturals")
            self.require(w.delta is not None and delta <= w.delta, f"{label}: weight gap {delta} exceeds claim")
            if w.sli:
                self.require(nonduplicating_slmi_gap(A, pairs) is not None, f"{label}: not a non-duplicating SLMI")
        k = degree(A, CONSTRUCTORS_ONLY, self.trs.constructors)
        self.require(k <= w.degree, f"{label}: degree {k} exceeds claimed {w.degree}")
        return k

    def dp_header(self, usable: tuple[int, ...]) -> None:
        self.require(self.cert.flavor == self.problem.flavor, f"flavor {self.cert.flavor} is not {self.problem.flavor}")
        self.require(set(self.cert.usable) == set(usable), "usable rules differ")

    def check(self) -> int:
        trs, cert, problem = self.trs, self.cert, self.problem
        self.require(cert.fingerprint == trs.fingerprint(), "certificate is for a different system")
        self.require(cert.mode in (FULL, INNERMOST), f"unknown mode {cert.mode}")
        self.require(cert.strategy in CERTIFIED_STRATEGIES, f"unknown strategy {cert.strategy}")
        if cert.strategy == DIRECT:
            return self.witness(self.one(ROLE_DIRECT), map_for_mode(trs, cert.mode), trs.indices)
        if cert.strategy in (WDP_COMPATIBLE, WDP_WEIGHTGAP):
            usable = tuple(problem.usable_rules())
            self.dp_header(usable)
            mu = map_for_mode(problem.combined(), cert.mode)
            pairs = tuple(problem.indices)
            if cert.strategy == WDP_COMPATIBLE:
                return self.witness(self.one(ROLE_COMPATIBLE), mu, pairs + usable)
            relative = self.witness(self.one(ROLE_RELATIVE), mu, pairs, usable, adequate=True)
            gap = self.witness(self.one(ROLE_GAP), mu, usable, gap=pairs, adequate=True)
            return max(relative, gap)
        self.require(cert.flavor == problem.flavor, f"flavor {cert.flavor} is not {problem.flavor}")
        paths = maximal_source_paths(congruence_graph(estimate_graph(problem)))
        expected = tuple(tuple(tuple(sorted(c)) for c in path) for path in paths)
        self.require(cert.paths == expected, "paths differ from the congruence graph")
        self.require(len(cert.witnesses) == sum(len(p) + 1 for p in paths), "unexpected number of witnesses")
        k = 0
        for p, path in enumerate(paths):
            q = path_pairs(path)
            usable = tuple(problem.usable_rules(q))
            mu = map_for_mode(problem.combined(q), cert.mode)
            k = max(k, self.witness(self.one(ROLE_PATH_GAP, p), mu, usable, gap=q, adequate=True))
            earlier: list[int] = []
            for j, cls in enumerate(path, 1):
                k = max(k, self.witness(self.one(ROLE_PATH_STEP, p, j), mu, cls, tuple(earlier) + usable))
                earlier.extend(cls)
        return k


def check_certificate(trs: Trs, cert: Certificate) -> CheckResult:
    """
    Validate a certificate against a system without running any search.

    Args:
        trs (Trs): the system the certificate claims to bound.
        cert (Certificate): the evidence.

    Returns:
        CheckResult: truthy when every side condition holds and the claimed degree covers
            the degree of every interpretation; otherwise falsy with the first failing reason.
    """
    try:
        k = _Checker(trs, cert).check()
        if cert.degree < k:
            raise _Reject(f"claimed degree {cert.degree} is below the interpretation degree {k}")
    except _Reject as e:
        logging.warning(f"certificate rejected: {e}")
        return CheckResult(False, str(e))
    except (UninterpretedSymbolError, DegreeError, ValueError) as e:
        logging.warning(f"certificate rejected: {e}")
        return CheckResult(False, str(e))
    return CheckResult(True)
