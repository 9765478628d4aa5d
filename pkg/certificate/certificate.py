from __future__ import annotations

import json
from dataclasses import dataclass, field

from complexity.dependency_pairs import DpProblem, dp_problem
from complexity.interpretation import MatrixInterpretation, interpretation_from_json, interpretation_to_json
from trs.parsing import Rule, Trs
from trs.replacement_map import ReplacementMap
from trs.term import Symbol

FORMAT = "rc-certificate/1"

DIRECT = "direct"
WDP_COMPATIBLE = "wdp-compatible"
WDP_WEIGHTGAP = "wdp-weightgap"
WDG = "wdg"
CERTIFIED_STRATEGIES = (DIRECT, WDP_COMPATIBLE, WDP_WEIGHTGAP, WDG)

# witness roles
ROLE_DIRECT = "direct"            # all rules strict
ROLE_COMPATIBLE = "compatible"    # P ∪ U(P) strict
ROLE_RELATIVE = "relative"        # P strict, U(P) weak
ROLE_GAP = "weight-gap"           # U strict, weight gap on the pairs
ROLE_PATH_GAP = "path-gap"        # U(Q) strict, weight gap on Q
ROLE_PATH_STEP = "path-step"      # P_j strict, P_1..P_j-1 ∪ U(Q) weak


@dataclass(frozen=True, eq=False)
class Witness:
    role: str
    interpretation: MatrixInterpretation
    mu: ReplacementMap
    degree: int
    strict: tuple[int, ...] = ()
    weak: tuple[int, ...] = ()
    gap: tuple[int, ...] = ()
    delta: int | None = None
    sli: bool = False                     # weight gap read off a non-duplicating SLMI
    path: int | None = None               # index into Certificate.paths
    step: int | None = None               # 1-based class position on that path


@dataclass(frozen=True, eq=False)
class Certificate:
    fingerprint: str
    mode: str                             # "full" | "innermost"
    strategy: str
    degree: int
    witnesses: tuple[Witness, ...]
    flavor: str | None = None             # "WDP" | "WIDP" for the dependency pair strategies
    usable: tuple[int, ...] = ()
    paths: tuple[tuple[tuple[int, ...], ...], ...] = ()
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def verdict(self) -> str:
        return "YES(?,O(1))" if self.degree == 0 else f"YES(?,O(n^{self.degree}))"


def symbol_table(trs: Trs, mode: str) -> dict[str, Symbol]:
    """Names usable in a certificate: the signature, the marked symbols and the compound symbols."""
    table = dict(trs.signature)
    problem = dp_problem(trs, mode)
    for f in sorted(problem.sharped, key=lambda g: g.name):
        table.setdefault(f.name, f)
        table.setdefault(f.origin.name, f.origin)
    for f in problem.compounds:
        table.setdefault(f.name, f)
    return table


def resolve_rule(trs: Trs, problem: DpProblem, index: int) -> Rule:
    """Global numbering: rules first, then the pairs."""
    if index in trs.indices:
        return trs.rule(index)
    return problem.pair(index)


def map_to_json(mu: ReplacementMap) -> dict[str, list[int]]:
    return {f.name: sorted(mu(f)) for f in mu.symbols()}


def map_from_json(data: dict, table: dict[str, Symbol]) -> ReplacementMap:
    entries = set()
    for name, indices in data.items():
        if name not in table:
            raise ValueError(f"unknown symbol {name} in replacement map")
        entries.update((table[name], int(i)) for i in indices)
    return ReplacementMap(frozenset(entries))


def _witness_to_json(w: Witness) -> dict:
    return {
        "role": w.role,
        "degree": w.degree,
        "strict": list(w.strict),
        "weak": list(w.weak),
        "gap": list(w.gap),
        "delta": w.delta,
        "sli": w.sli,
        "path": w.path,
        "step": w.step,
        "mu": map_to_json(w.mu),
        "interpretation": interpretation_to_json(w.interpretation),
    }


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "format": FORMAT,
        "fingerprint": cert.fingerprint,
        "mode": cert.mode,
        "strategy": cert.strategy,
        "degree": cert.degree,
        "flavor": cert.flavor,
        "usable": list(cert.usable),
        "paths": [[list(c) for c in path] for path in cert.paths],
        "witnesses": [_witness_to_json(w) for w in cert.witnesses],
    }


def _ints(values) -> tuple[int, ...]:
    return tuple(int(v) for v in values)


def certificate_from_json(data: dict, trs: Trs) -> Certificate:
    """
    Rebuild a certificate against the system it claims to bound.

    Args:
        data (dict): document produced by certificate_to_json.
        trs (Trs): the input system; symbol names are resolved in its signature extended by
            the marked and compound symbols of its dependency pairs.

    Returns:
        Certificate: structurally valid; whether it proves anything is check_certificate's job.
    """
    if data.get("format") != FORMAT:
        raise ValueError(f"unsupported certificate format {data.get('format')!r}")
    mode = data["mode"]
    table = symbol_table(trs, mode)
    witnesses = []
    for w in data["witnesses"]:
        witnesses.append(Witness(
            role=w["role"],
            interpretation=interpretation_from_json(w["interpretation"], table),
            mu=map_from_json(w.get("mu", {}), table),
            degree=int(w["degree"]),
            strict=_ints(w.get("strict", ())),
            weak=_ints(w.get("weak", ())),
            gap=_ints(w.get("gap", ())),
            delta=None if w.get("delta") is None else int(w["delta"]),
            sli=bool(w.get("sli", False)),
            path=None if w.get("path") is None else int(w["path"]),
            step=None if w.get("step") is None else int(w["step"]),
        ))
    return Certificate(
        fingerprint=data["fingerprint"],
        mode=mode,
        strategy=data["strategy"],
        degree=int(data["degree"]),
        witnesses=tuple(witnesses),
        flavor=data.get("flavor"),
        usable=_ints(data.get("usable", ())),
        paths=tuple(tuple(_ints(c) for c in path) for path in data.get("paths", ())),
    )


def dumps(cert: Certificate) -> str:
    return json.dumps(certificate_to_json(cert), indent=2)


def loads(text: str, trs: Trs) -> Certificate:
    try:
        return certificate_from_json(json.loads(text), trs)
    except (KeyError, TypeError, AttributeError) as e:
        raise ValueError(f"malformed certificate: {e}") from e
