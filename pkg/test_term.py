import random

import pytest

from trs.term import (App, PositionError, Symbol, Var, compose, format_term, fresh_var, function_symbols,
                      is_ground, match, positions, rename_apart, replace_at, reset_fresh, sharp_symbol, size,
                      substitute, subterm_at, unify, variable_counts, variables)

f = Symbol("f", 2)
g = Symbol("g", 1)
s = Symbol("s", 1)
a = Symbol("a", 0)
b = Symbol("b", 0)
x, y, z = Var("x"), Var("y"), Var("z")


def test_symbol_builds_terms_and_checks_arity():
    assert f(x, a()) == App(f, (x, App(a)))
    with pytest.raises(ValueError, match="arity mismatch"):
        f(x)


def test_size_counts_every_symbol_and_variable_occurrence():
    assert size(f(x, g(a()))) == 4
    assert size(x) == 1


def test_positions_are_preorder():
    t = f(g(x), a())
    assert positions(t) == [(), (1,), (1, 1), (2,)]


def test_subterm_at_and_replace_at():
    t = f(g(x), a())
    assert subterm_at(t, (1, 1)) == x
    assert replace_at(t, (1,), b()) == f(b(), a())
    assert replace_at(t, (), b()) == b()


@pytest.mark.parametrize("p", [(3,), (1, 2), (2, 1)])
def test_positions_out_of_range(p):
    t = f(g(x), a())
    with pytest.raises(PositionError, match="position out of range"):
        subterm_at(t, p)
    with pytest.raises(PositionError, match="position out of range"):
        replace_at(t, p, a())


def test_variables_in_order_of_first_occurrence():
    t = f(g(y), f(x, y))
    assert variables(t) == [y, x]
    assert variable_counts(t)[y] == 2
    assert function_symbols(t) == {f, g}
    assert not is_ground(t)
    assert is_ground(f(a(), b()))


def test_match_binds_pattern_variables():
    assert match(f(x, g(y)), f(a(), g(b()))) == {x: a(), y: b()}


@pytest.mark.parametrize("pattern, subject", [
    (f(x, x), f(a(), b())),
    (g(x), f(a(), b())),
    (f(x, g(y)), f(a(), b())),
    (g(a()), g(x)),
])
def test_match_failures(pattern, subject):
    assert match(pattern, subject) is None


def test_unify_general_case():
    sigma = unify(f(x, g(a())), f(g(y), z))
    assert sigma is not None
    assert substitute(f(x, g(a())), sigma) == substitute(f(g(y), z), sigma)
    assert sigma[x] == g(y)


def test_unify_occurs_check_and_clash():
    assert unify(x, g(x)) is None
    assert unify(g(x), f(x, y)) is None
    assert unify(f(x, x), f(a(), b())) is None


def test_unify_is_most_general_on_random_instances():
    rng = random.Random(7)
    leaves = [x, y, z, a(), b()]

    def term(depth):
        if depth == 0 or rng.random() < 0.3:
            return rng.choice(leaves)
        if rng.random() < 0.5:
            return g(term(depth - 1))
        return f(term(depth - 1), term(depth - 1))

    for _ in range(200):
        s, t = term(3), term(3)
        sigma = unify(s, t)
        if sigma is not None:
            assert substitute(s, sigma) == substitute(t, sigma)


def test_compose_applies_left_then_right():
    sigma = {x: g(y)}
    tau = {y: a(), z: b()}
    rho = compose(sigma, tau)
    t = f(x, z)
    assert substitute(t, rho) == substitute(substitute(t, sigma), tau)


def test_rename_apart_uses_fresh_variables():
    t = f(x, g(x))
    renamed = rename_apart(t, {x})
    assert x not in variables(renamed)
    assert len(variables(renamed)) == 1
    assert match(t, renamed) is not None and match(renamed, t) is not None


def test_rename_apart_skips_avoided_fresh_names():
    reset_fresh()
    taken = {Var("x", 1), Var("x", 2)}
    renamed = rename_apart(g(x), taken)
    assert renamed == g(Var("x", 3))


def test_deep_terms_need_no_recursion():
    depth = 5_000
    t, u = a(), a()
    for _ in range(depth):
        t, u = s(t), s(u)
    assert t == u and t is not u
    assert size(t) == depth + 1
    deep = (1,) * depth
    assert subterm_at(t, deep) == a()
    assert replace_at(t, deep, b()) != t
    with_var = replace_at(t, deep, x)
    assert substitute(with_var, {x: a()}) == t
    assert len(positions(t)) == depth + 1


def test_fresh_variables_never_collide_with_parsed_ones():
    reset_fresh()
    v = fresh_var("x")
    assert v != x
    assert str(v) == "x_1"
    assert str(fresh_var()) == "z_2"


def test_format_term_and_sharp_symbol():
    assert format_term(f(x, a())) == "f(x,a)"
    assert format_term(f(x, a()), explicit_constants=True) == "f(x,a())"
    fs = sharp_symbol(f)
    assert fs.name == "f#" and fs.origin == f and fs.arity == 2
    assert sharp_symbol(fs) == fs
