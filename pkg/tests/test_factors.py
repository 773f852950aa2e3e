import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divcontract import factors
from divcontract.poly import MultiPoly, parse_poly
from strategies import V3

X, Y, Z = (MultiPoly.var(v, V3) for v in V3)


def P(s):
    return parse_poly(s, V3)


def linear(a, b, c):
    return X.scale(a) + Y.scale(b) + Z.scale(c)


def brute_linear_factor(f, bound=3):
    """Search for a linear divisor with small integer coefficients."""
    for a, b, c in itertools.product(range(-bound, bound + 1), repeat=3):
        if (a, b, c) == (0, 0, 0):
            continue
        l = linear(a, b, c)
        # divisibility: f vanishes identically on l = 0
        if c:
            img = (X.scale(-a) + Y.scale(-b)).scale(1 / __import__("fractions").Fraction(c))
            sub = {"z": img}
        elif b:
            sub = {"y": X.scale(-__import__("fractions").Fraction(a, b))}
        else:
            sub = {"x": MultiPoly.zero(V3)}
        from divcontract.jets import compose
        if not compose(f, sub, None):
            return True
    return False


@pytest.mark.parametrize("f,irreducible", [
    ("x^3+y^3+z^3", True),
    ("y^2*z-x^3-x*z^2", True),
    ("y^2*z+z^3", False),
    ("x*y*z", False),
    ("x^3", False),
    ("y^2*z-x^3", True),  # cuspidal cubic
    ("y^2*z-x^2*(x+z)", True),  # nodal cubic
    ("x^3+y^3", False),
])
def test_irreducibility_examples(f, irreducible):
    assert factors.is_irreducible_cubic(P(f)) is irreducible


ints = st.integers(-3, 3)


@given(st.tuples(ints, ints, ints).filter(any),
       st.lists(st.tuples(st.sampled_from([(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0),
                                            (1, 0, 1), (0, 1, 1)]), ints.filter(bool)),
                min_size=1, max_size=4))
@settings(max_examples=30)
def test_product_with_linear_form_is_reducible(l, quad):
    q = MultiPoly.zero(V3)
    for e, c in quad:
        q = q + MultiPoly.monomial(e, c, V3)
    if not q:
        return
    f = linear(*l) * q
    assert factors.linear_factor_exists(f)


def test_agrees_with_brute_force_on_random_cubics():
    rng = random.Random(7)
    monos = [e for e in itertools.product(range(4), repeat=3) if sum(e) == 3]
    for _ in range(25):
        f = MultiPoly.zero(V3)
        for e in rng.sample(monos, 3):
            f = f + MultiPoly.monomial(e, rng.choice([-2, -1, 1, 2]), V3)
        if brute_linear_factor(f):
            assert factors.linear_factor_exists(f)


def test_square_linear_divisor():
    assert factors.square_linear_divisor_exists(P("y^2*z"))
    assert factors.square_linear_divisor_exists(P("(x+y)^2*(x-z)"))
    assert not factors.square_linear_divisor_exists(P("y^2*z+z^3"))
    assert not factors.square_linear_divisor_exists(P("x*y*z"))
    assert factors.square_linear_divisor_exists(MultiPoly.zero(V3))


@pytest.mark.parametrize("f,expected", [
    ("x*y+x", True),
    ("x+y^2", False),
    ("x^2-y^2", True),
    ("x^2+y^2+z^3", False),
    ("x*z^2+t", None),
    ("x", False),
])
def test_proper_component_through_origin(f, expected):
    if expected is None:
        with pytest.raises(Exception):
            factors.proper_component_through_origin(P(f))
        return
    assert factors.proper_component_through_origin(P(f)) is expected


@pytest.mark.parametrize("h,pattern", [
    ("y^3+z^3", "distinct"), ("y^2*z", "double"), ("y^3", "triple"), ("y*z*(y+z)", "distinct"),
])
def test_binary_cubic_pattern(h, pattern):
    assert factors.binary_cubic_pattern(P(h), "y", "z") == pattern


@pytest.mark.parametrize("q,square", [
    ("x^2", True), ("(y+2*z)^2", True), ("(x+y-z)^2", True), ("y^2+z^2", False),
    ("x*y", False), ("0", True),
])
def test_square_test(q, square):
    assert factors.square_test_q2(P(q)) is square


def test_closed_form_misses_squares_in_x():
    assert factors.square_test_closed_form(P("(y+2*z)^2"))
    assert not factors.square_test_closed_form(P("x^2"))
    assert factors.square_test_q2(P("x^2"))


@given(st.tuples(ints, ints, ints))
def test_square_of_linear_form_is_square(l):
    q = linear(*l)
    assert factors.square_test_q2(q * q)
    assert factors.quadratic_rank(q * q) == (1 if any(l) else 0)
