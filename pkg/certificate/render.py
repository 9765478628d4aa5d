from __future__ import annotations

from certificate.certificate import Certificate, Witness
from complexity.dependency_pairs import dp_problem
from complexity.interpretation import format_interpretation
from trs.parsing import Trs
from trs.term import format_term

MAYBE = "MAYBE"


def render_verdict(cert: Certificate | None) -> str:
    return MAYBE if cert is None else cert.verdict


def _indices(indices: tuple[int, ...]) -> str:
    return "{" + ",".join(str(i) for i in sorted(indices)) + "}"


def _witness_block(w: Witness) -> list[str]:
    title = w.role
    if w.path is not None:
        title += f" path {w.path + 1}" + (f" step {w.step}" if w.step else "")
    lines = [f"{'-' * 10} {title} {'-' * 10}"]
    lines.append(f"dimension: {w.interpretation.dimension}, degree: {w.degree}")
    if w.strict:
        lines.append(f"strict: {_indices(w.strict)}")
    if w.weak:
        lines.append(f"weak: {_indices(w.weak)}")
    if w.gap:
        lines.append(f"weight gap on {_indices(w.gap)}: {w.delta}" + (" (non-duplicating SLMI)" if w.sli else ""))
    mu = w.mu.format()
    lines.append("replacement map:" + ("" if mu else " none"))
    lines.extend(f"  {line}" for line in mu)
    lines.append("interpretation:")
    lines.extend(f"  {line}" for line in format_interpretation(w.interpretation))
    return lines


def render_certificate(cert: Certificate, trs: Trs | None = None) -> str:
    """Human-readable proof: strategy header, the numbered rules and pairs, then every witness."""
    lines = [f"{'=' * 25} Certificate {'=' * 25}",
             f"strategy: {cert.strategy}",
             f"mode: {cert.mode}",
             f"bound: O(n^{cert.degree})",
             f"system: {cert.fingerprint}"]
    if trs is not None:
        lines.append("rules:")
        lines.extend(f"  {k}: {format_term(r.lhs)} -> {format_term(r.rhs)}" for k, r in zip(trs.indices, trs.rules))
        if cert.flavor is not None:
            lines.append(f"{cert.flavor}:")
            lines.extend(f"  {line}" for line in dp_problem(trs, cert.mode).format())
    if cert.flavor is not None and cert.strategy != "wdg":
        lines.append(f"usable rules: {_indices(cert.usable)}")
    for p, path in enumerate(cert.paths, 1):
        lines.append(f"path {p}: " + " -> ".join(_indices(c) for c in path))
    for w in cert.witnesses:
        lines.extend(_witness_block(w))
    lines.extend(f"note: {n}" for n in cert.notes)
    lines.append("=" * 63)
    return "\n".join(lines) + "\n"
