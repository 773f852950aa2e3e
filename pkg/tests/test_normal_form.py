import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divcontract import normal_form as nf
from divcontract.germ import Germ3Fold
from divcontract.ideals import PolyIdeal
from divcontract.jets import CoordinateChange
from divcontract.poly import MultiPoly, parse_poly
from strategies import V4, random_stratum_germ

N = 12


def G(F, I):
    return Germ3Fold.from_strings(F, list(I), N)


@pytest.mark.parametrize("F,I,tag", [
    ("x^2+y^2*z+z^3+t^5", "xzt", "D_FDl"),
    ("x^2+y^2*z+z^4+t^4+t*y^3", "xzt", "D_FDl_n5plus"),
    ("x^2+y^2*z+2*y*z^3+t^3+t*y^3", "xyt", "D_FDr_even"),
    ("x^2+y^2*z+2*x*z^3+t^3+t*x*z", "xyt", "D_FDr_odd_a"),
    ("x^2+y^2*z+2*x*z^3+t^3+t*x*z", "xyt", "D_FDr_odd_b"),
    ("x^2+y^2+2*x*z^2+t^3+t*x*y", "xyt", "A3_middle"),
])
def test_certificate_on_examples(F, I, tag):
    g = G(F, I)
    r = nf.normalize(g, tag)
    assert r.form_tag == tag
    assert r.certificate_holds(g.F)
    assert r.violations() == {}


def test_target_inference():
    assert nf.infer_target(G("x^2+y^2*z+z^3+t^5", "xzt")) == "D_FDl"
    assert nf.infer_target(G("x^2+y^2*z+z^5+t^5", "xzt")) == "D_FDl_n5plus"
    assert nf.infer_target(G("x^2+y^2*z+2*y*z^3+t^3", "xyt")) == "D_FDr_even"
    assert nf.infer_target(G("x^2+y^2*z+2*x*z^3+t^3", "xyt")) == "D_FDr_odd_a"


def test_a3_middle_reports_low_degree_part():
    r = nf.normalize_A3_middle(G("x^2+y^2+2*x*z^2+t^3", "xyt"))
    assert r.f_le3 == parse_poly("2*x*z^2+t^3", V4)


def test_errors():
    with pytest.raises(nf.NotInShape):
        nf.normalize(G("x^2+y^2*z+z^3+t^5", "xzt"), "D_FDr_even")
    with pytest.raises(nf.WrongStratum):
        nf.normalize_A3_middle(G("x^2+y^2+2*x*z^3+t^3", "xyt"))
    with pytest.raises(ValueError):
        nf.normalize(G("x^2+y^2*z+z^3+t^5", "xzt"), "E8")


def test_jet_order_guard():
    with pytest.raises(nf.JetOrderInsufficient):
        nf.normalize(Germ3Fold.from_strings("x^2+y^2*z+z^6+t^3", list("xzt"), 6), "D_FDl_n5plus")


@pytest.mark.parametrize("tag", nf.FORM_TAGS)
def test_idempotent(tag):
    rng = random.Random(hash(tag) % 1000)
    for _ in range(5):
        g = random_stratum_germ(tag, rng, N)
        r = nf.normalize(g, tag)
        vars = g.vars
        I = PolyIdeal([MultiPoly.var(v, vars) for v in r.curve], vars)
        again = nf.normalize(Germ3Fold(r.F_normal.poly, I, N), tag)
        assert again.F_normal.poly == r.F_normal.poly


@given(st.sampled_from(nf.FORM_TAGS), st.integers(0, 10_000), st.integers(-2, 2), st.integers(-2, 2))
@settings(max_examples=30)
def test_certificate_after_curve_preserving_change(tag, seed, a, b):
    g = random_stratum_germ(tag, random.Random(seed), N)
    x, y, t = (MultiPoly.var(v, V4) for v in "xyt")
    # x -> x + a*t*y and a unit 1 + b*t keep the t = 0 section and the curve ideal
    change = CoordinateChange({"x": x + (t * y).scale(a)}, V4)
    unit = MultiPoly.const(1, V4) + t.scale(b)
    F2 = unit.mul(change.apply(g.F, N), N)
    g2 = Germ3Fold(F2, g.I, N)
    r = nf.normalize(g2, tag)
    assert r.certificate_holds(F2)
    assert r.violations() == {}
