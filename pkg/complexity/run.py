from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from rich.console import Console
from rich.logging import RichHandler

from certificate.certificate import Certificate
from certificate.check import check_certificate
from certificate.render import render_verdict
from complexity.config import AnalysisConfig, OracleConfig
from complexity.pipeline import analyze, resolve_mode
from trs.oracle import BoundCheck, ComplexitySample, check_polynomial_bound, runtime_complexity_samples
from trs.parsing import INNERMOST, Trs
from trs.rewriting import FULL_MODE, INNERMOST_MODE

config: AnalysisConfig | None = None


@dataclass
class AnalysisResult:
    verdict: str
    certificate: Certificate | None
    mode: str
    seconds: float
    notes: list[str] = field(default_factory=list)


def setup(analysis: AnalysisConfig | None = None, level: str = "INFO") -> None:
    global config

    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True))],
        force=True,
    )
    config = analysis or AnalysisConfig()


def run(trs: Trs, analysis: AnalysisConfig | None = None) -> AnalysisResult:
    """
    Analyze a system under a global deadline and self-check the resulting certificate.

    Args:
        trs (Trs): parsed input system.
        analysis (AnalysisConfig, optional): overrides the configuration installed by setup().

    Returns:
        AnalysisResult: verdict line, certificate (None for MAYBE), timing and notes such as "timeout".
    """
    analysis = analysis or config or AnalysisConfig()
    mode = resolve_mode(trs, analysis.mode)
    started = time.monotonic()
    deadline = started + analysis.timeout

    logging.info(f"Running analysis of {len(trs)} rules ({mode})...")
    cert = analyze(trs, analysis, deadline)
    notes = []
    if time.monotonic() >= deadline:
        notes.append("timeout")
    if cert is not None and not check_certificate(trs, cert):
        notes.append("certificate failed its own check")
        cert = None
    seconds = time.monotonic() - started
    logging.info(f"Analysis finished in {seconds:.2f}s: {render_verdict(cert)}")
    return AnalysisResult(render_verdict(cert), cert, mode, seconds, notes)


def run_oracle(trs: Trs, mode: str, degree: int | None, oracle: OracleConfig | None = None
               ) -> tuple[list[ComplexitySample], BoundCheck | None]:
    """rc(n) table for n <= n_max and, for a certified degree, the fitted bound check."""
    oracle = oracle or OracleConfig()
    step_mode = INNERMOST_MODE if mode == INNERMOST else FULL_MODE
    logging.info(f"Running oracle up to size {oracle.n_max}...")
    samples = runtime_complexity_samples(trs, step_mode, oracle.n_max, oracle.fuel)
    if degree is None:
        return samples, None
    return samples, check_polynomial_bound(samples, degree, oracle.fit_n)
