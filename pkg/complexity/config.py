from __future__ import annotations

from dataclasses import dataclass, field

KNOWN_STRATEGIES = ("direct", "wdp", "wdg")


@dataclass
class SearchConfig:
    max_dim: int = 2                       # matrix dimensions tried: 1..max_dim
    coeff_bound: int = 3                   # entries and constants range over 0..coeff_bound
    degree_cap: int | None = None          # reject interpretations of larger degree
    max_nodes: int = 200_000               # search nodes per (problem, dimension)

    def __post_init__(self):
        if self.max_dim < 1:
            raise ValueError("--dim must be at least 1")
        if self.coeff_bound < 1:
            raise ValueError("--coeff-bound must be at least 1")
        if self.degree_cap is not None and self.degree_cap < 0:
            raise ValueError("--degree-cap must be natural")
        if self.max_nodes < 1:
            raise ValueError("--search-budget must be positive")


@dataclass
class OracleConfig:
    n_max: int = 8                         # largest start-term size sampled
    fuel: int = 100_000                    # rewrite steps per start term before "diverged"
    closure_budget: int = 100_000          # terms explored per relative S* closure
    fit_n: int = 6                         # sizes used to fit the constant C


@dataclass
class AnalysisConfig:
    mode: str | None = None                # None: take the strategy from the file | "full" | "innermost"
    strategies: tuple[str, ...] = KNOWN_STRATEGIES
    search: SearchConfig = field(default_factory=SearchConfig)
    timeout: float = 60.0                  # seconds for the whole analysis

    def __post_init__(self):
        self.strategies = tuple(self.strategies)
        if not self.strategies:
            raise ValueError("at least one strategy must be enabled")
        unknown = [s for s in self.strategies if s not in KNOWN_STRATEGIES]
        if unknown:
            raise ValueError(f"unknown strategy {unknown[0]}")
        if self.mode not in (None, "full", "innermost"):
            raise ValueError(f"unknown mode {self.mode}")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
