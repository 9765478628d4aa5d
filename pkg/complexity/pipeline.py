from __future__ import annotations

import logging
import time
from typing import Callable, Iterable

from certificate.certificate import (DIRECT, ROLE_COMPATIBLE, ROLE_DIRECT, ROLE_GAP, ROLE_PATH_GAP,
                                     ROLE_PATH_STEP, ROLE_RELATIVE, WDG, WDP_COMPATIBLE, WDP_WEIGHTGAP,
                                     Certificate, Witness)
from complexity.config import AnalysisConfig, SearchConfig
from complexity.dependency_pairs import DpProblem, dp_problem
from complexity.graph import congruence_graph, estimate_graph, maximal_source_paths, path_pairs
from complexity.interpretation import (CONSTRUCTORS_ONLY, MatrixInterpretation, degree,
                                       nonduplicating_slmi_gap, weight_gap_delta)
from complexity.search import (FREE, UNIT, Found, SearchBudget, SearchProblem, find_interpretation,
                               find_with_escalation, rule_symbols, shapes_for)
from trs.parsing import FULL, INNERMOST, Rule, Trs, is_duplicating
from trs.replacement_map import ReplacementMap, map_for_mode


def resolve_mode(trs: Trs, mode: str | None = None) -> str:
    """Explicit mode wins, then the file's STRATEGY section, then full rewriting."""
    if mode is not None:
        return mode
    return INNERMOST if trs.strategy == INNERMOST else FULL


def _cap(*caps: int | None) -> int | None:
    known = [c for c in caps if c is not None]
    return min(known) if known else None


class Synthesizer:
    """Builds search problems over one system and runs them under a shared deadline."""

    def __init__(self, trs: Trs, search: SearchConfig | None = None, deadline: float | None = None,
                 degree_cap: int | None = None):
        self.trs = trs
        self.search = search or SearchConfig()
        self.deadline = deadline
        self.degree_cap = _cap(self.search.degree_cap, degree_cap)

    def budget(self) -> SearchBudget:
        return SearchBudget(self.search.max_nodes, self.deadline)

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() >= self.deadline

    def problem(self, d: int, mu: ReplacementMap, strict: Iterable[Rule], weak: Iterable[Rule] = (),
                gap: Iterable[Rule] = (), compounds: Iterable = (), compound_shape: str = FREE,
                everything: str | None = None) -> SearchProblem:
        strict = tuple(strict)
        weak = tuple(r for r in weak if r not in strict)
        gap = tuple(gap)
        symbols = rule_symbols(strict + weak + gap)
        shapes = shapes_for(symbols, self.trs.constructors, compounds, compound_shape, everything)
        return SearchProblem(d, self.search.coeff_bound, mu, strict, weak, shapes, self.degree_cap,
                             self.trs.constructors, gap)

    def find(self, label: str, build: Callable[[int], SearchProblem]) -> MatrixInterpretation | None:
        logging.info(f"Running search for {label}...")
        outcome = find_with_escalation(build, self.search.max_dim, self.budget())
        if isinstance(outcome, Found):
            logging.debug(f"{label}: found at d={outcome.interpretation.dimension}")
            return outcome.interpretation
        logging.info(f"{label}: no interpretation ({outcome.stats.nodes} nodes"
                     f"{', budget hit' if outcome.stats.budget_hit else ''})")
        return None

    def find_sli(self, label: str, mu: ReplacementMap, strict: Iterable[Rule],
                 gap: Iterable[Rule]) -> MatrixInterpretation | None:
        logging.info(f"Running search for {label} (strongly linear)...")
        outcome = find_interpretation(self.problem(1, mu, strict, gap=gap, everything=UNIT), self.budget())
        return outcome.interpretation if isinstance(outcome, Found) else None

    def degree(self, A: MatrixInterpretation) -> int:
        return degree(A, CONSTRUCTORS_ONLY, self.trs.constructors)


def analyze_direct(trs: Trs, mode: str, search: SearchConfig | None = None, deadline: float | None = None,
                   degree_cap: int | None = None) -> Certificate | None:
    """A single mu-monotone RMI orienting every rule strictly."""
    synth = Synthesizer(trs, search, deadline, degree_cap)
    mu = map_for_mode(trs, mode)
    A = synth.find("direct", lambda d: synth.problem(d, mu, trs.rules))
    if A is None:
        return None
    k = synth.degree(A)
    witness = Witness(ROLE_DIRECT, A, mu, k, strict=tuple(trs.indices))
    return Certificate(trs.fingerprint(), mode, DIRECT, k, (witness,))


def _dp_setup(trs: Trs, mode: str) -> tuple[DpProblem, tuple[int, ...], ReplacementMap]:
    problem = dp_problem(trs, mode)
    usable = tuple(problem.usable_rules())
    return problem, usable, map_for_mode(problem.combined(), mode)


def wdp_compatible(trs: Trs, mode: str, search: SearchConfig | None = None, deadline: float | None = None,
                   degree_cap: int | None = None) -> Certificate | None:
    """P ∪ U(P) oriented strictly by one mu-monotone RMI."""
    synth = Synthesizer(trs, search, deadline, degree_cap)
    problem, usable, mu = _dp_setup(trs, mode)
    strict = list(problem.pairs) + [trs.rule(k) for k in usable]
    A = synth.find(f"{problem.flavor} ∪ U compatibility",
                   lambda d: synth.problem(d, mu, strict, compounds=problem.compounds))
    if A is None:
        return None
    k = synth.degree(A)
    witness = Witness(ROLE_COMPATIBLE, A, mu, k, strict=tuple(problem.indices) + usable)
    return Certificate(trs.fingerprint(), mode, WDP_COMPATIBLE, k, (witness,), problem.flavor, usable)


def _weight_gap_witness(synth: Synthesizer, label: str, mu: ReplacementMap, usable: tuple[int, ...],
                        pair_ids: Iterable[int], problem: DpProblem, role: str, path: int | None = None
                        ) -> Witness | None:
    """Adequate interpretation with U strict and a weight gap on the pairs; SLI first when possible."""
    trs = synth.trs
    pair_ids = tuple(sorted(pair_ids))
    pairs = problem.rules(pair_ids)
    strict = [trs.rule(k) for k in usable]
    if not is_duplicating(pairs):
        A = synth.find_sli(label, mu, strict, pairs)
        if A is not None:
            delta = nonduplicating_slmi_gap(A, pairs)
            if delta is not None:
                return Witness(role, A, mu, synth.degree(A), strict=usable, gap=pair_ids,
                               delta=delta, sli=True, path=path)
    A = synth.find(label, lambda d: synth.problem(d, mu, strict, gap=pairs, compounds=problem.compounds,
                                                   compound_shape=UNIT))
    if A is None:
        return None
    return Witness(role, A, mu, synth.degree(A), strict=usable, gap=pair_ids,
                   delta=weight_gap_delta(A, pairs), path=path)


def wdp_weight_gap(trs: Trs, mode: str, search: SearchConfig | None = None, deadline: float | None = None,
                   degree_cap: int | None = None) -> Certificate | None:
    """Relative bound for P modulo U(P), lifted to R by the weight gap of an adequate interpretation."""
    synth = Synthesizer(trs, search, deadline, degree_cap)
    problem, usable, mu = _dp_setup(trs, mode)
    weak = [trs.rule(k) for k in usable]
    B = synth.find(f"{problem.flavor} relative to U",
                   lambda d: synth.problem(d, mu, problem.pairs, weak, compounds=problem.compounds,
                                           compound_shape=UNIT))
    if B is None:
        return None
    relative = Witness(ROLE_RELATIVE, B, mu, synth.degree(B), strict=tuple(problem.indices), weak=usable)
    gap = _weight_gap_witness(synth, "weight gap", mu, usable, problem.indices, problem, ROLE_GAP)
    if gap is None:
        return None
    k = max(relative.degree, gap.degree)
    return Certificate(trs.fingerprint(), mode, WDP_WEIGHTGAP, k, (relative, gap), problem.flavor, usable)


def analyze_wdp(trs: Trs, mode: str, search: SearchConfig | None = None, deadline: float | None = None,
                degree_cap: int | None = None) -> Certificate | None:
    cert = wdp_compatible(trs, mode, search, deadline, degree_cap)
    if cert is not None:
        return cert
    return wdp_weight_gap(trs, mode, search, deadline, degree_cap)


def analyze_wdg(trs: Trs, mode: str, search: SearchConfig | None = None, deadline: float | None = None,
                degree_cap: int | None = None) -> Certificate | None:
    """
    Path analysis over the congruence graph of the weak dependency graph.

    Every maximal source path needs a weight-gap interpretation for its pairs and, for each
    prefix, an interpretation orienting the last class strictly and the earlier classes plus
    the usable rules weakly.

    Returns:
        Certificate | None: degree is the maximum over every interpretation of every path.
    """
    synth = Synthesizer(trs, search, deadline, degree_cap)
    problem = dp_problem(trs, mode)
    cg = congruence_graph(estimate_graph(problem))
    paths = maximal_source_paths(cg)
    logging.info(f"Running path analysis over {len(paths)} paths...")
    witnesses: list[Witness] = []
    for p, path in enumerate(paths):
        name = " -> ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in path)
        q = path_pairs(path)
        usable = tuple(problem.usable_rules(q))
        mu = map_for_mode(problem.combined(q), mode)
        gap = _weight_gap_witness(synth, f"path {name} weight gap", mu, usable, q, problem, ROLE_PATH_GAP, p)
        if gap is None:
            return None
        witnesses.append(gap)
        used = [trs.rule(k) for k in usable]
        earlier: list[int] = []
        for j, cls in enumerate(path, 1):
            strict = problem.rules(cls)
            weak = problem.rules(earlier) + used
            B = synth.find(f"path {name} step {j}", lambda d: synth.problem(d, mu, strict, weak))
            if B is None:
                return None
            witnesses.append(Witness(ROLE_PATH_STEP, B, mu, synth.degree(B), strict=tuple(sorted(cls)),
                                     weak=tuple(sorted(earlier)) + usable, path=p, step=j))
            earlier.extend(cls)
    k = max((w.degree for w in witnesses), default=0)
    flat = tuple(tuple(tuple(sorted(c)) for c in path) for path in paths)
    return Certificate(trs.fingerprint(), mode, WDG, k, tuple(witnesses), problem.flavor, paths=flat)


STRATEGIES: dict[str, Callable[..., Certificate | None]] = {
    "direct": analyze_direct,
    "wdp": analyze_wdp,
    "wdg": analyze_wdg,
}


def analyze(trs: Trs, config: AnalysisConfig | None = None, deadline: float | None = None) -> Certificate | None:
    """
    Run the enabled strategies in order and keep the certificate of smallest degree.

    Each strategy gets an equal share of the time left; time it does not use passes on to the next.

    Args:
        trs (Trs): system to bound.
        config (AnalysisConfig, optional): strategies, search parameters, mode and timeout.
        deadline (float, optional): time.monotonic() value after which no new search starts.
            Defaults to now plus the configured timeout.

    Returns:
        Certificate | None: None stands for MAYBE.
    """
    config = config or AnalysisConfig()
    if deadline is None:
        deadline = time.monotonic() + config.timeout
    mode = resolve_mode(trs, config.mode)
    best: Certificate | None = None
    for position, name in enumerate(config.strategies):
        if best is not None and best.degree == 0:
            break
        now = time.monotonic()
        if now >= deadline:
            logging.warning(f"Deadline reached before strategy {name}")
            break
        share = now + (deadline - now) / (len(config.strategies) - position)
        logging.info(f"Running {name} strategy ({mode}, {share - now:.1f}s)...")
        cap = None if best is None else best.degree - 1
        cert = STRATEGIES[name](trs, mode, config.search, share, cap)
        if cert is not None and (best is None or cert.degree < best.degree):
            logging.info(f"{name}: {cert.verdict}")
            best = cert
    return best
