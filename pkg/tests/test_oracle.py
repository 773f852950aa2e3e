import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divcontract import oracle
from divcontract.duval import DuValType
from divcontract.germ import Germ3Fold
from divcontract.ideals import PolyIdeal
from divcontract.jets import CoordinateChange
from divcontract.poly import MultiPoly
from strategies import invertible_linear

V4 = ("x", "y", "z", "t")


def G(F, I):
    return Germ3Fold.from_strings(F, list(I))


def test_genericity_order():
    order = [DuValType("Smooth"), DuValType("A", 1), DuValType("A", 7), DuValType("D", 4),
             DuValType("D", 9), DuValType("E", 6), DuValType("E", 8), DuValType("Undetermined", 12),
             DuValType("NotDuVal")]
    for a, b in zip(order, order[1:]):
        assert oracle.GenericityOrder.less(a, b)
        assert not oracle.GenericityOrder.less(b, a)


def test_sample_section_of_coordinate_hyperplane():
    s = oracle.sample_section(G("x^2+y^2*z+2*y*z^3+t^3", "xyt"), (0, 0, 1))
    assert s.eliminated == "t" and s.type == DuValType("D", 6)
    assert s.position.label == "FD_r" and s.d == 3


def test_no_du_val_section():
    sec = oracle.find_general_section(G("x^2+y^3+z^3+y*t^6", "xyz"))
    assert isinstance(sec, oracle.NoDuValSection)
    assert sec.square_certificate["rank_two_attainable"] is False
    assert all(s.type.family == "NotDuVal" for s in sec.samples)


def test_general_section_is_deterministic_and_most_generic():
    g = G("x^2+y^2*z+z^5+t^5", "xzt")
    a = oracle.find_general_section(g, seed=3)
    b = oracle.find_general_section(g, seed=3)
    assert a.to_json() == b.to_json()
    special = oracle.sample_section(g, (0, 0, 1))
    assert not oracle.GenericityOrder.less(special.type, a.type)


def test_lift_special_section():
    g = G("x^2+y^2*z+z^5+t^5", "xzt")
    c = oracle.lift_special_section(oracle.sample_section(g, (0, 0, 1)))
    assert c.position == "FD_l" and c.max_index == 6
    assert c.admits(oracle.find_general_section(g))
    g = G("x^2+y^2*z+2*y*z^3+t^3", "xyt")
    c = oracle.lift_special_section(oracle.sample_section(g, (0, 0, 1)))
    assert c.position == "FD_r" and c.even
    assert c.admits(oracle.find_general_section(g))
    with pytest.raises(oracle.OutsideHypotheses):
        oracle.lift_special_section(oracle.sample_section(G("x^2+y^2*z+2*x*z^3+t^3", "xyt"), (0, 0, 1)))
    with pytest.raises(oracle.OutsideHypotheses):
        oracle.lift_special_section(oracle.sample_section(G("x^2+y^2*z+z^3+t^3", "xzt"), (0, 0, 1)))


@pytest.mark.parametrize("F,exists", [
    ("x^2+y^2*z+z^4+t^4", False),
    ("x^2+y^2*z+z^4+t^3", True),
    ("x^2+y^2*z+z^4+t*y^2", False),
])
def test_d4_section_exists(F, exists):
    assert oracle.d4_section_exists(G(F, "xzt")) is exists


def test_square_presentation_cubic():
    sp = oracle.square_presentation(G("x^2+y^2*z+z^3+t^5", "xzt"))
    assert sp.pivot == "x"
    assert str(sp.f3) == "y^2*z + z^3"


@pytest.mark.parametrize("F,I,kind,stratum", [
    ("x^2+y^2*z+z^3+t^5", "xzt", "CanonicalOnly", "D4"),
    ("x^2+y^2*z+t^3+z^3", "xzt", "Terminal", "D4"),
    ("x^2+y^2*z+z^4+t^4", "xzt", "CanonicalOnly", "D5 FD_l"),
    ("x^2+y^3+z^3+y*t^6", "xyz", "NoDuValSection", "no Du Val section"),
    ("x^2+y^2*z+2*y*z^3+t^3", "xyt", "Terminal", "D6 FD_r"),
    ("x^2+y^2*z+2*y*z^3+t^4", "xyt", "CanonicalOnly", "D6 FD_r"),
    ("x^2+y^2*z+2*x*z^3+t^3", "xyt", "Undetermined", "D7 FD_r odd"),
    ("x^2+y^2+z*t", "xyz", "Terminal", "A1 edge"),
    ("x^2+y^2+2*x*z^2+t^4", "xyt", "CanonicalOnly", "A3 middle"),
])
def test_decide_contraction_examples(F, I, kind, stratum):
    v = oracle.decide_contraction(G(F, I))
    assert (v.kind, v.stratum) == (kind, stratum)
    assert (v.payload is not None) == (kind == "Terminal")
    json.dumps(v.to_json())


def test_terminal_payloads():
    v = oracle.decide_contraction(G("x^2+y^2*z+2*y*z^3+t^3", "xyt"))
    assert v.payload.index == 2 and v.payload.higher_index_points == "one cD point"
    assert v.cross_check.agree is True
    v = oracle.decide_contraction(G("x^2+y^2+z*t", "xyz"))
    assert v.payload.index == 2 and v.payload.generator_degree_bound == 2


def test_outside_hypotheses():
    with pytest.raises(oracle.OutsideHypotheses):
        oracle.decide_contraction(G("x^3+y^3+z^3+x*t^3", "xyz"))


def test_verdict_validation():
    with pytest.raises(ValueError):
        oracle.ContractionVerdict("Terminal", "x")
    with pytest.raises(ValueError):
        oracle.ContractionVerdict("Maybe", "x")


def test_disagreement_raises_cross_check_error():
    # reducible cubic z*(y^2 + t^2) with a2 != 0: cubic test says canonical, charts say terminal
    with pytest.raises(oracle.CrossCheckError) as exc:
        oracle.decide_contraction(G("x^2+y^2*z+2*y*z^3+t*(t*z)+t^4", "xyt"))
    assert exc.value.record.agree is False


@pytest.mark.parametrize("F,I,regime", [
    ("x^2+y^2*z+2*y*z^3+t^3", "xyt", "terminal-regime"),
    ("x^2+y^2*z+2*y*z^3+t^4", "xyt", "canonical-only-regime"),
    ("x^2+y^2*z+z^3+t^5", "xzt", "canonical-only-regime"),
    ("x^2+y^2*z+2*x*z^3+t^3", "xyt", "unsupported"),
])
def test_verify_by_charts(F, I, regime):
    assert oracle.verify_by_charts(G(F, I)).regime == regime


def test_generator_degrees():
    assert oracle.check_generator_degrees(G("x^2+y^2+z*t", "xyz"), 2, 3)
    chk = oracle.check_generator_degrees(G("x*y-z^2+t^3", "xzt"), 1, 2)
    assert not chk and chk.failures == [2]


@given(invertible_linear(V4))
@settings(max_examples=6)
def test_verdict_invariant_under_linear_changes(lin):
    g = G("x^2+y^2*z+2*y*z^3+t^3", "xyt")
    c = CoordinateChange(lin, V4)
    F2 = c.apply(g.F, None)
    I2 = PolyIdeal([c.apply(h, None) for h in g.I.gens], V4)
    try:
        v = oracle.decide_contraction(Germ3Fold(F2, I2))
    except oracle.InconclusiveSampling:
        return
    assert v.kind == "Terminal" and v.stratum == "D6 FD_r"
