import pytest

from complexity.dependency_pairs import sharp, weak_dependency_pairs
from trs.oracle import (ComplexitySample, Diverged, HeightOracle, basic_terms_up_to, check_polynomial_bound,
                        derivation_height, ground_terms_up_to, runtime_complexity_samples, sample_derivation)
from trs.parsing import Trs
from trs.rewriting import INNERMOST_MODE, RelativeProblem
from trs.term import size


def test_basic_terms_of_size_three(corpus):
    trs = corpus("div")
    sig = trs.signature
    zero = sig["0"]()
    assert basic_terms_up_to(trs, 3) == [sig["div"](zero, zero), sig["minus"](zero, zero)]


def test_basic_terms_are_sorted_by_size(corpus):
    terms = basic_terms_up_to(corpus("div"), 6)
    sizes = [size(t) for t in terms]
    assert sizes == sorted(sizes)
    assert max(sizes) == 6


def test_ground_terms_include_nested_defined_symbols(corpus):
    trs = corpus("div")
    terms = ground_terms_up_to(trs, 3)
    assert trs.signature["s"](trs.signature["0"]()) in terms
    assert len(basic_terms_up_to(trs, 3)) < len(terms)


def test_derivation_height_of_division(corpus):
    trs = corpus("div")
    sig = trs.signature
    one = sig["s"](sig["0"]())
    assert derivation_height(sig["div"](one, one), trs) == 3


def exp_start(trs, n):
    sig = trs.signature
    t = sig["0"]()
    for _ in range(n):
        t = sig["r"](t)
    return sig["exp"](t)


@pytest.mark.parametrize("n", range(1, 9))
def test_exponentiation_heights(corpus, n):
    trs = corpus("exp")
    h = derivation_height(exp_start(trs, n), trs)
    assert h >= 2 ** n
    assert h == 2 ** n + 2 * n


@pytest.mark.parametrize("n", [1, 4])
def test_exponentiation_heights_innermost(corpus, n):
    trs = corpus("exp")
    assert derivation_height(exp_start(trs, n), trs, INNERMOST_MODE) == 2 ** n + 2 * n


def test_cycles_diverge(corpus):
    trs = corpus("toyama")
    sig = trs.signature
    a, b = sig["a"](), sig["b"]()
    h = derivation_height(sig["f"](a, b, sig["g"](a, b)), trs, fuel=50)
    assert isinstance(h, Diverged)
    assert str(h) == "diverged(50)"


def test_relative_heights_count_strict_steps_only(corpus):
    trs = corpus("div")
    sig = trs.signature
    one = sig["s"](sig["0"]())
    prob = RelativeProblem(Trs.from_rules([trs.rule(4)]), Trs.from_rules(trs.rules[:3]))
    assert derivation_height(sig["div"](one, one), prob) == 1


def test_oracle_rejects_nonpositive_fuel(corpus):
    with pytest.raises(ValueError, match="fuel must be positive"):
        HeightOracle(corpus("div"), fuel=0)


def test_runtime_complexity_of_toyama_stays_bounded(corpus):
    samples = runtime_complexity_samples(corpus("toyama"), n_max=5)
    assert [s.n for s in samples] == [1, 2, 3, 4, 5]
    assert not any(s.diverged for s in samples)
    assert max(s.value for s in samples) == 1


def test_runtime_complexity_is_monotone(corpus):
    samples = runtime_complexity_samples(corpus("div"), n_max=7)
    values = [s.value for s in samples]
    assert values == sorted(values)
    assert values[0] == 0
    assert check_polynomial_bound(samples, 1).passed


def test_polynomial_bound_fit():
    samples = [ComplexitySample(n, n * n) for n in range(1, 9)]
    quadratic = check_polynomial_bound(samples, 2)
    assert quadratic.passed and quadratic.constant == 1
    linear = check_polynomial_bound(samples, 1, fit_n=6)
    assert not linear.passed
    assert linear.constant == 6
    assert linear.failures == (7, 8)


def test_polynomial_bound_fails_on_divergence():
    samples = [ComplexitySample(1, 0), ComplexitySample(2, 5, diverged=True)]
    check = check_polynomial_bound(samples, 3)
    assert not check.passed
    assert check.failures == (2,)


def test_sample_derivation_walks_to_a_normal_form(corpus):
    trs = corpus("div")
    sig = trs.signature
    one = sig["s"](sig["0"]())
    walk = sample_derivation(sig["div"](one, one), trs, steps=10)
    assert [(p, k) for _, p, k in walk] == [((), 4), ((1, 1), 1), ((1,), 3)]


def test_unary_constructors_are_enumerated(corpus):
    trs = corpus("ab")
    sig = trs.signature
    a, s = sig["a"](), sig["s"]
    terms = basic_terms_up_to(trs, 5)
    assert sig["f"](a, s(a), a) in terms
    assert all(size(t) <= 5 for t in terms)
    assert s(s(a)) in ground_terms_up_to(trs, 3)


def test_runtime_complexity_of_division(corpus):
    samples = runtime_complexity_samples(corpus("div"), n_max=7)
    assert [s.value for s in samples] == [0, 0, 1, 1, 3, 5, 7]


@pytest.mark.parametrize("name, n", [("div", 7), ("diff", 5)])
def test_marked_start_terms_keep_their_height(corpus, name, n):
    trs = corpus(name)
    problem = weak_dependency_pairs(trs)
    plain = HeightOracle(trs)
    with_rules = HeightOracle(Trs.from_rules(problem.pairs + trs.rules))
    with_usable = HeightOracle(problem.combined())
    checked = 0
    for t in basic_terms_up_to(trs, n):
        h = plain.height(t)
        if isinstance(h, Diverged):
            continue
        marked = sharp(t)
        assert with_rules.height(marked) == h
        assert with_usable.height(marked) == h
        checked += 1
    assert checked > 0
