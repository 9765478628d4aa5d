import time

import pytest

from certificate import DIRECT, WDG, WDP_COMPATIBLE, WDP_WEIGHTGAP, check_certificate
from complexity import run as runner
from complexity.config import AnalysisConfig, OracleConfig, SearchConfig
from complexity.pipeline import (STRATEGIES, analyze, analyze_direct, analyze_wdg, analyze_wdp, resolve_mode,
                                 wdp_weight_gap)
from trs.parsing import parse_trs

runner.setup(level="WARNING")

SMALL = SearchConfig(max_dim=1, coeff_bound=3)
TINY = SearchConfig(max_dim=1, coeff_bound=2, max_nodes=2_000)


def config(*strategies, search=SMALL, **kwargs):
    return AnalysisConfig(strategies=strategies, search=search, **kwargs)


def test_mode_resolution(corpus):
    assert resolve_mode(corpus("div")) == "full"
    assert resolve_mode(corpus("lists")) == "innermost"
    assert resolve_mode(corpus("lists"), "full") == "full"


def test_strategy_registry():
    assert list(STRATEGIES) == ["direct", "wdp", "wdg"]


def test_division_direct(corpus):
    trs = corpus("div")
    cert = analyze_direct(trs, "full", SMALL)
    assert cert is not None
    assert cert.strategy == DIRECT
    assert cert.degree == 1
    assert check_certificate(trs, cert)


def test_division_dependency_pairs(corpus):
    trs = corpus("div")
    cert = analyze_wdp(trs, "full", SMALL)
    assert cert is not None
    assert cert.strategy == WDP_COMPATIBLE
    assert cert.flavor == "WDP"
    assert cert.usable == (1, 2)
    assert cert.degree == 1
    assert check_certificate(trs, cert)


def test_division_weight_gap_route(corpus):
    trs = corpus("div")
    cert = wdp_weight_gap(trs, "full", SMALL)
    assert cert is not None
    assert cert.strategy == WDP_WEIGHTGAP
    assert [w.role for w in cert.witnesses] == ["relative", "weight-gap"]
    assert cert.witnesses[1].delta is not None
    assert check_certificate(trs, cert)


def test_isolated_cycles_by_path_analysis(corpus):
    trs = corpus("ab")
    cert = analyze_wdg(trs, "full", SMALL)
    assert cert is not None
    assert cert.strategy == WDG
    assert cert.paths == (((3,),), ((4,),))
    assert len(cert.witnesses) == 4
    assert cert.degree == 1
    assert check_certificate(trs, cert)


def test_constant_bound_stops_the_analysis(corpus):
    trs = parse_trs("(VAR x)(RULES f(x) -> a)")
    cert = analyze(trs, config("direct", "wdp", "wdg"))
    assert cert is not None
    assert cert.strategy == DIRECT
    assert cert.verdict == "YES(?,O(1))"


@pytest.mark.parametrize("name", ["exp", "fg"])
def test_exponential_systems_stay_open(corpus, name):
    assert analyze(corpus(name), AnalysisConfig()) is None


@pytest.mark.parametrize("name", ["div", "minus_f"])
def test_default_analysis_after_a_linear_direct_bound(corpus, name):
    trs = corpus(name)
    cert = analyze(trs, AnalysisConfig())
    assert cert is not None
    assert cert.verdict == "YES(?,O(n^1))"
    assert check_certificate(trs, cert)


def test_default_analysis_of_gcd_reaches_the_path_analysis(corpus):
    trs = corpus("gcd")
    result = runner.run(trs, AnalysisConfig())
    assert result.verdict == "YES(?,O(n^2))"
    assert result.certificate.strategy == WDG


def test_differentiation_needs_dependency_pairs(corpus):
    trs = corpus("diff")
    assert analyze_direct(trs, "full", SMALL) is None
    cert = analyze_wdp(trs, "full", SMALL)
    assert cert is not None
    assert cert.usable == ()
    assert cert.degree == 1
    assert check_certificate(trs, cert)


def test_expired_deadline_skips_every_strategy(corpus):
    assert analyze(corpus("div"), config("direct"), deadline=time.monotonic() - 1) is None


def test_run_self_checks_and_reports(corpus):
    result = runner.run(corpus("div"), config("direct"))
    assert result.verdict == "YES(?,O(n^1))"
    assert result.mode == "full"
    assert result.certificate is not None
    assert result.notes == []


def test_run_reports_maybe(corpus):
    result = runner.run(corpus("exp"), config("direct", search=TINY))
    assert result.verdict == "MAYBE"
    assert result.certificate is None


def test_oracle_agrees_with_the_linear_bound(corpus):
    samples, check = runner.run_oracle(corpus("div"), "full", 1, OracleConfig(n_max=7))
    assert [s.value for s in samples] == [0, 0, 1, 1, 3, 5, 7]
    assert check.passed


def test_oracle_without_a_bound(corpus):
    samples, check = runner.run_oracle(corpus("exp"), "innermost", None, OracleConfig(n_max=4))
    assert check is None
    assert len(samples) == 4


@pytest.mark.parametrize("kwargs, message", [
    (dict(strategies=()), "at least one strategy"),
    (dict(strategies=("direct", "magic")), "unknown strategy magic"),
    (dict(mode="outermost"), "unknown mode outermost"),
    (dict(timeout=0), "timeout must be positive"),
])
def test_analysis_config_validation(kwargs, message):
    with pytest.raises(ValueError, match=message):
        AnalysisConfig(**kwargs)


@pytest.mark.parametrize("kwargs, message", [
    (dict(max_dim=0), "--dim"),
    (dict(coeff_bound=0), "--coeff-bound"),
    (dict(degree_cap=-1), "--degree-cap"),
    (dict(max_nodes=0), "--search-budget"),
])
def test_search_config_validation(kwargs, message):
    with pytest.raises(ValueError, match=message):
        SearchConfig(**kwargs)
