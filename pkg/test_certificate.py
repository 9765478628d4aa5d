import dataclasses
import json

import pytest

from certificate import (DIRECT, MAYBE, ROLE_COMPATIBLE, ROLE_DIRECT, ROLE_GAP, ROLE_PATH_GAP, ROLE_PATH_STEP,
                         ROLE_RELATIVE, WDG, WDP_COMPATIBLE, WDP_WEIGHTGAP, Certificate, Witness,
                         certificate_to_json, check_certificate, dumps, loads, render_certificate, render_verdict,
                         symbol_table)
from complexity.dependency_pairs import weak_dependency_pairs
from complexity.interpretation import MatrixInterpretation
from trs.replacement_map import EMPTY_MAP, ReplacementMap, map_for_mode, usable_map


def table(trs):
    return symbol_table(trs, "full")


@pytest.fixture
def div(corpus):
    return corpus("div")


def direct_certificate(trs, div_matrix=3, claimed=1):
    t = table(trs)
    A = MatrixInterpretation.build(1, {
        t["0"]: ((), 1), t["s"]: ((1,), 2), t["minus"]: ((1, 0), 1), t["div"]: ((div_matrix, 0), 0)})
    w = Witness(ROLE_DIRECT, A, usable_map(trs), claimed, strict=(1, 2, 3, 4))
    return Certificate(trs.fingerprint(), "full", DIRECT, claimed, (w,))


def gap_interpretation(t):
    return MatrixInterpretation.build(1, {
        t["0"]: ((), 0), t["c_1"]: ((), 0), t["s"]: ((1,), 2),
        t["minus"]: ((1, 0), 1), t["minus#"]: ((1, 0), 1), t["div#"]: ((1, 0), 1)})


def relative_interpretation(t):
    return MatrixInterpretation.build(1, {
        t["0"]: ((), 0), t["c_1"]: ((), 0), t["s"]: ((1,), 1),
        t["minus"]: ((1, 0), 0), t["minus#"]: ((1, 0), 1), t["div#"]: ((1, 0), 1)})


def dp_mu(trs):
    return map_for_mode(weak_dependency_pairs(trs).combined(), "full")


def weight_gap_certificate(trs, delta=0):
    t = table(trs)
    mu = dp_mu(trs)
    relative = Witness(ROLE_RELATIVE, relative_interpretation(t), mu, 1, strict=(5, 6, 7, 8), weak=(1, 2))
    gap = Witness(ROLE_GAP, gap_interpretation(t), mu, 1, strict=(1, 2), gap=(5, 6, 7, 8), delta=delta)
    return Certificate(trs.fingerprint(), "full", WDP_WEIGHTGAP, 1, (relative, gap), "WDP", (1, 2))


def test_direct_certificate_is_accepted(div):
    cert = direct_certificate(div)
    assert check_certificate(div, cert)
    assert cert.verdict == "YES(?,O(n^1))"


def test_compatible_certificate_is_accepted(div):
    t = table(div)
    w = Witness(ROLE_COMPATIBLE, gap_interpretation(t), dp_mu(div), 1, strict=(5, 6, 7, 8, 1, 2))
    cert = Certificate(div.fingerprint(), "full", WDP_COMPATIBLE, 1, (w,), "WDP", (1, 2))
    assert check_certificate(div, cert)


def test_weight_gap_certificate_is_accepted(div):
    assert check_certificate(div, weight_gap_certificate(div))


def test_wdg_certificate_for_isolated_cycles(corpus):
    trs = corpus("ab")
    t = table(trs)
    first = MatrixInterpretation.build(1, {
        t["a"]: ((), 0), t["s"]: ((1,), 1), t["f#"]: ((0, 1, 0), 0)})
    second = MatrixInterpretation.build(1, {
        t["b"]: ((), 0), t["s"]: ((1,), 1), t["f#"]: ((0, 0, 1), 0)})
    witnesses = (
        Witness(ROLE_PATH_GAP, first, EMPTY_MAP, 1, gap=(3,), delta=0, path=0),
        Witness(ROLE_PATH_STEP, first, EMPTY_MAP, 1, strict=(3,), path=0, step=1),
        Witness(ROLE_PATH_GAP, second, EMPTY_MAP, 1, gap=(4,), delta=0, path=1),
        Witness(ROLE_PATH_STEP, second, EMPTY_MAP, 1, strict=(4,), path=1, step=1),
    )
    cert = Certificate(trs.fingerprint(), "full", WDG, 1, witnesses, "WDP", paths=(((3,),), ((4,),)))
    assert check_certificate(trs, cert)
    wrong_paths = dataclasses.replace(cert, paths=(((3, 4),),))
    assert check_certificate(trs, wrong_paths).reason == "paths differ from the congruence graph"
    missing = dataclasses.replace(cert, witnesses=witnesses[:3])
    assert check_certificate(trs, missing).reason == "unexpected number of witnesses"


def test_diff_weight_gap_free_compatible_certificate(corpus):
    trs = corpus("diff")
    t = table(trs)
    A = MatrixInterpretation.build(1, {
        t["D#"]: ((2,), 0), t["c"]: ((), 1), t["t"]: ((), 1),
        t["plus"]: ((1, 1), 1), t["minus"]: ((1, 1), 1), t["times"]: ((1, 1), 1),
        t["c_1"]: ((), 0), t["c_2"]: ((), 0), t["c_3"]: ((1, 1), 0), t["c_4"]: ((1, 1), 0),
        t["c_5"]: ((0, 1, 0, 1), 0),
    })
    mu = map_for_mode(weak_dependency_pairs(trs).combined(), "full")
    assert mu.format() == ["c_3: {1,2}", "c_4: {1,2}", "c_5: {2,4}"]
    w = Witness(ROLE_COMPATIBLE, A, mu, 1, strict=(6, 7, 8, 9, 10))
    cert = Certificate(trs.fingerprint(), "full", WDP_COMPATIBLE, 1, (w,), "WDP", ())
    assert check_certificate(trs, cert)


@pytest.mark.parametrize("change, reason", [
    (dict(fingerprint="0" * 64), "certificate is for a different system"),
    (dict(strategy="magic"), "unknown strategy magic"),
    (dict(mode="outermost"), "unknown mode outermost"),
    (dict(degree=0), "claimed degree 0 is below the interpretation degree 1"),
])
def test_tampered_headers_are_rejected(div, change, reason):
    cert = dataclasses.replace(direct_certificate(div), **change)
    result = check_certificate(div, cert)
    assert not result
    assert result.reason == reason


def test_rule_that_does_not_decrease_is_rejected(div):
    result = check_certificate(div, direct_certificate(div, div_matrix=1))
    assert not result
    assert "is not strictly decreasing" in result.reason


def test_understated_witness_degree_is_rejected(div):
    cert = direct_certificate(div)
    w = dataclasses.replace(cert.witnesses[0], degree=0)
    result = check_certificate(div, dataclasses.replace(cert, witnesses=(w,)))
    assert result.reason == "direct: degree 1 exceeds claimed 0"


def test_wrong_replacement_map_is_rejected(div):
    cert = direct_certificate(div)
    w = dataclasses.replace(cert.witnesses[0], mu=ReplacementMap())
    result = check_certificate(div, dataclasses.replace(cert, witnesses=(w,)))
    assert result.reason == "direct: replacement map differs from the usable map"


def test_wrong_rule_sets_are_rejected(div):
    cert = direct_certificate(div)
    w = dataclasses.replace(cert.witnesses[0], strict=(1, 2, 3))
    assert check_certificate(div, dataclasses.replace(cert, witnesses=(w,))).reason == "direct: wrong strict rules"


def test_weight_gap_claims_are_checked(div):
    assert check_certificate(div, weight_gap_certificate(div, delta=5))
    result = check_certificate(div, weight_gap_certificate(div, delta=None))
    assert result.reason == "weight-gap: weight gap 0 exceeds claim"


def test_missing_witness_is_rejected(div):
    cert = weight_gap_certificate(div)
    result = check_certificate(div, dataclasses.replace(cert, witnesses=cert.witnesses[:1]))
    assert result.reason == "expected one weight-gap witness"


def test_wrong_usable_rules_are_rejected(div):
    cert = dataclasses.replace(weight_gap_certificate(div), usable=(1,))
    assert check_certificate(div, cert).reason == "usable rules differ"


def test_uninterpreted_symbols_are_rejected(div):
    t = table(div)
    A = MatrixInterpretation.build(1, {t["s"]: ((1,), 2)})
    w = Witness(ROLE_DIRECT, A, usable_map(div), 1, strict=(1, 2, 3, 4))
    result = check_certificate(div, Certificate(div.fingerprint(), "full", DIRECT, 1, (w,)))
    assert not result
    assert "uninterpreted symbol" in result.reason


def test_json_certificate_survives_a_round_trip(div):
    cert = weight_gap_certificate(div)
    again = loads(dumps(cert), div)
    assert certificate_to_json(again) == certificate_to_json(cert)
    assert check_certificate(div, again)


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d.update(format="other/1"), "unsupported certificate format"),
    (lambda d: d.pop("mode"), "malformed certificate"),
    (lambda d: d["witnesses"][0]["mu"].update(nope=[1]), "unknown symbol nope"),
])
def test_malformed_json_is_rejected(div, mutate, message):
    data = certificate_to_json(direct_certificate(div))
    mutate(data)
    with pytest.raises(ValueError, match=message):
        loads(json.dumps(data), div)


def test_symbol_table_includes_marked_and_compound_symbols(div):
    names = set(table(div))
    assert {"div", "minus", "0", "s", "div#", "minus#", "c_1"} <= names


def test_verdicts():
    assert render_verdict(None) == MAYBE
    cert = Certificate("x", "full", DIRECT, 0, ())
    assert render_verdict(cert) == "YES(?,O(1))"
    assert dataclasses.replace(cert, degree=2).verdict == "YES(?,O(n^2))"


def test_rendered_certificate_lists_rules_pairs_and_witnesses(div):
    text = render_certificate(weight_gap_certificate(div), div)
    lines = text.splitlines()
    assert lines[0] == f"{'=' * 25} Certificate {'=' * 25}"
    assert "strategy: wdp-weightgap" in lines
    assert "bound: O(n^1)" in lines
    assert "  4: div(s(x),s(y)) -> s(div(minus(x,y),s(y)))" in lines
    assert "  8: div#(s(x),s(y)) -> div#(minus(x,y),s(y))" in lines
    assert "usable rules: {1,2}" in lines
    assert "weight gap on {5,6,7,8}: 0" in lines
    assert "  div#: {1}" in lines
    assert "  s(x1) = [[1]]*x1 + [2]" in lines
