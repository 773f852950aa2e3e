from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divcontract.jets import (CoordinateChange, Jet, NotACoordinateChange, NotPrepared, apply_change,
                              split_u_linear, straighten, unit_inverse, unit_power,
                              weierstrass_prepare, weierstrass_reduction)
from divcontract.poly import MultiPoly, parse_poly
from strategies import V3, invertible_linear, polys

N = 8


def P(s):
    return parse_poly(s, V3)


def test_apply_change_example():
    c = CoordinateChange({"x": P("x+y^2")}, V3)
    assert apply_change(P("x^2"), c, 6).poly == P("x^2+2*x*y^2+y^4")
    assert apply_change(P("x^2"), c, 3).poly == P("x^2+2*x*y^2")


def test_rejects_non_changes():
    with pytest.raises(NotACoordinateChange):
        CoordinateChange({"x": P("y")}, V3)
    with pytest.raises(NotACoordinateChange):
        CoordinateChange({"x": P("x+1")}, V3)


def test_unit_inverse_and_power():
    u = P("1+x+y*z")
    assert u.mul(unit_inverse(u, N), N) == MultiPoly.const(1, V3)
    r = unit_power(u, Fraction(1, 2), N)
    assert r.mul(r, N) == u.truncate(N)


@given(invertible_linear(), polys(max_terms=3, min_order=1))
def test_inverse_change_undoes_change(lin, extra):
    images = {v: lin[v] + (extra.part_from(2) if v == "x" else MultiPoly.zero(V3)) for v in V3}
    c = CoordinateChange(images, V3)
    inv = c.inverse(N)
    for v in V3:
        assert c.then(inv, N).image(v).truncate(N) == MultiPoly.var(v, V3)


@given(polys(max_terms=4, min_order=1), invertible_linear())
def test_change_is_a_ring_map(p, lin):
    c = CoordinateChange(lin, V3)
    q = p + MultiPoly.var("y", V3)
    assert c.apply(p * q, None) == c.apply(p, None) * c.apply(q, None)


def test_weierstrass_prepare_example():
    F = P("x^2*(1+y) + x*z^2 + y^3")
    U, A, B = weierstrass_prepare(F, "x", N)
    x = MultiPoly.var("x", V3)
    assert not A.involves("x") and not B.involves("x")
    assert U.mul(x * x + A * x + B, N) == F.truncate(N)


@given(polys(max_terms=4, min_order=3))
def test_weierstrass_reduction_certificate(tail):
    F = P("x^2") + tail
    G, change, unit = weierstrass_reduction(F, "x", N)
    assert unit.mul(change.apply(F, N), N) == G.poly
    B = G.poly - P("x^2")
    assert not B.involves("x")


def test_weierstrass_needs_pivot_square():
    with pytest.raises(NotPrepared):
        weierstrass_prepare(P("y^2+x*z"), "x", N)


def test_split_u_linear_removes_linear_terms():
    G, change = split_u_linear(P("x^2+2*x*y*z+z^3"), "x", N)
    assert 1 not in G.split_by("x")
    assert change.apply(P("x^2+2*x*y*z+z^3"), N) == G


def test_straighten_makes_curve_linear():
    V4 = ("x", "y", "z", "t")
    gens = [parse_poly(s, V4) for s in ("x-z^2", "y-z^3", "t")]
    c = straighten(gens, ("x", "y", "t"), N)
    for g, target in zip(gens, ("x", "y", "t")):
        assert c.apply(g, N) == MultiPoly.var(target, V4)


def test_jet_truncates():
    j = Jet(P("x+x^5"), 3)
    assert j.poly == P("x")
