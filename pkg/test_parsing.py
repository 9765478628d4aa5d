import pytest

from trs.parsing import (FULL, INNERMOST, UNSPECIFIED, TrsParseError, is_duplicating, parse_trs,
                         print_trs)
from trs.term import App, Var


def test_div_parses_in_source_order(corpus):
    trs = corpus("div")
    assert len(trs) == 4
    assert [str(r) for r in trs.rules] == [
        "minus(x,0) -> x",
        "minus(s(x),s(y)) -> minus(x,y)",
        "div(0,s(y)) -> 0",
        "div(s(x),s(y)) -> s(div(minus(x,y),s(y)))",
    ]
    assert {f.name for f in trs.defined} == {"minus", "div"}
    assert {f.name for f in trs.constructors} == {"0", "s"}
    assert trs.strategy == UNSPECIFIED
    assert trs.rule(1).rhs == Var("x")


def test_strategy_section(corpus):
    assert corpus("lists").strategy == INNERMOST
    assert parse_trs("(VAR x)(STRATEGY FULL)(RULES f(x) -> a)").strategy == FULL


def test_without_var_section_bare_identifiers_are_variables():
    trs = parse_trs("(RULES f(x) -> g(x, a()))")
    rule = trs.rule(1)
    assert rule.lhs.args[0] == Var("x")
    assert isinstance(rule.rhs.args[1], App)
    assert trs.signature["a"].arity == 0


def test_duplicate_rules_are_kept():
    trs = parse_trs("(VAR x)(RULES f(x) -> a f(x) -> a)")
    assert len(trs) == 2
    assert trs.rule(1) == trs.rule(2)


def test_comment_is_skipped_with_nested_parentheses():
    trs = parse_trs("(COMMENT a (nested (comment)) here)(VAR x)(RULES f(x) -> a)")
    assert len(trs) == 1


def test_empty_system():
    trs = parse_trs("(RULES )")
    assert len(trs) == 0
    assert trs.signature == {}


@pytest.mark.parametrize("text, message", [
    ("(VAR x)(RULES x -> a)", "variable left-hand side"),
    ("(VAR x y)(RULES f(x) -> y)", "free variable in right-hand side"),
    ("(VAR x)(RULES f(x) -> f(x, x))", "arity mismatch"),
    ("(VAR x)(RULES f(x) -> x(a))", "arity mismatch"),
    ("(VAR x)(RULES f(x) ->= a)", "unsupported section"),
    ("(VAR x)(THEORY (AC f))(RULES f(x) -> a)", "unsupported section"),
    ("(VAR x)(RULES f(x) -> a", "unterminated RULES section"),
    ("(VAR x)(RULES f(x) -> x)", "signature has no constant"),
    ("(VAR x)(RULES f(x) a)", "unexpected token"),
])
def test_parse_errors(text, message):
    with pytest.raises(TrsParseError, match=message):
        parse_trs(text)


def test_parse_error_carries_position():
    with pytest.raises(TrsParseError) as info:
        parse_trs("(VAR x y)\n(RULES\n  f(x) -> y\n)")
    assert info.value.line == 3
    assert str(info.value).startswith("3:")


@pytest.mark.parametrize("name", ["div", "gcd", "diff", "exp", "lists", "dup", "ab", "fg"])
def test_print_then_parse_preserves_rules(corpus, name):
    trs = corpus(name)
    again = parse_trs(print_trs(trs))
    assert again.rules == trs.rules
    assert again.strategy == trs.strategy
    assert again.fingerprint() == trs.fingerprint()


def test_fingerprint_distinguishes_systems(corpus):
    assert corpus("div").fingerprint() != corpus("gcd").fingerprint()
    assert len(corpus("div").fingerprint()) == 64


def test_is_duplicating(corpus):
    assert is_duplicating(corpus("div"))                     # y twice in the last rule
    assert not is_duplicating(corpus("ab"))
    assert not is_duplicating(corpus("minus_f"))
    assert is_duplicating(corpus("dup"))
    assert is_duplicating(corpus("fg"))
