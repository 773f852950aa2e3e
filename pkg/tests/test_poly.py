from fractions import Fraction

import pytest
from hypothesis import given

from divcontract.poly import MultiPoly, PolyParseError, format_poly, parse_poly
from strategies import V3, polys

X, Y, Z = (MultiPoly.var(v, V3) for v in V3)


@pytest.mark.parametrize("text,expected", [
    ("x^2+y^2*z", X * X + Y * Y * Z),
    ("x**2 - 3/2*y", X * X - Y.scale(Fraction(3, 2))),
    ("(x+y)^2", X * X + X * Y.scale(2) + Y * Y),
    ("-z^3", -(Z * Z * Z)),
    ("2*(x - y)*(x + y)", (X * X - Y * Y).scale(2)),
    ("0", MultiPoly.zero(V3)),
])
def test_parse_examples(text, expected):
    assert parse_poly(text, V3) == expected


@pytest.mark.parametrize("bad", ["x^", "x+*y", "w", "x^-1", "(x", "x/y", "x/0", "2x", ""])
def test_parse_errors(bad):
    with pytest.raises(PolyParseError):
        parse_poly(bad, V3)


def test_format_is_canonical():
    p = parse_poly("y*x + x*y - 1/2*z^2 + x^3", V3)
    assert format_poly(p) == format_poly(parse_poly(format_poly(p), V3))


def test_degree_order_and_parts():
    p = parse_poly("x^2 + y^3*z + z^5", V3)
    assert p.order() == 2 and p.degree() == 5
    assert p.homogeneous_part(4) == parse_poly("y^3*z", V3)
    assert p.truncate(4) == parse_poly("x^2+y^3*z", V3)
    assert MultiPoly.zero(V3).order() is None


def test_divide_and_adic_order():
    p = parse_poly("x^2*z^3 + x^3*z", V3)
    assert p.var_adic_order("x") == 2
    assert p.divide_by_var_power("x", 2) == parse_poly("z^3 + x*z", V3)


@given(polys(), polys())
def test_roundtrip_and_commutativity(p, q):
    assert parse_poly(format_poly(p), V3) == p
    assert p + q == q + p
    assert p * q == q * p


@given(polys(max_terms=3), polys(max_terms=3), polys(max_terms=3))
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p - p == MultiPoly.zero(V3)


@given(polys(max_terms=3), polys(max_terms=3))
def test_leibniz_rule(p, q):
    for v in V3:
        assert (p * q).diff(v) == p.diff(v) * q + p * q.diff(v)


@given(polys(max_terms=4), polys(max_terms=4))
def test_evaluation_is_a_homomorphism(p, q):
    pt = (Fraction(1, 2), Fraction(-2), Fraction(3))
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)


@given(polys(max_terms=4))
def test_truncated_product_matches_full(p):
    q = p + X
    assert p.mul(q, 4) == (p * q).truncate(4)


@given(polys(max_terms=4))
def test_sympy_roundtrip(p):
    from divcontract.poly import poly_from_sympy
    assert poly_from_sympy(p.to_sympy(), V3) == p
