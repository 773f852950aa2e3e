import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from divcontract import duval
from divcontract.duval import DuValType, classify, classify_duval, intersection_multiplicity
from divcontract.jets import CoordinateChange, unit_inverse
from divcontract.poly import MultiPoly, parse_poly
from strategies import V3, invertible_linear

N = 12
UVW = ("u", "v", "w")

NORMAL_FORMS = ([(f"x^2+y^2+z^{n + 1}", f"A{n}") for n in range(1, 11)]
                + [(f"x^2+y^2*z+z^{n - 1}", f"D{n}") for n in range(4, 12)]
                + [("x^2+y^3+z^4", "E6"), ("x^2+y^3+y*z^3", "E7"), ("x^2+y^3+z^5", "E8")])


def P(s, vars=V3):
    return parse_poly(s, vars)


def global_milnor(f):
    """dim Q[x,y,z]/(df), independent of the library (sympy Groebner basis)."""
    syms = sympy.symbols(V3)
    expr = f.to_sympy(syms)
    G = sympy.groebner([sympy.diff(expr, s) for s in syms], *syms, order="grevlex")
    leads = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in G.exprs]
    count = 0
    for e in itertools.product(range(13), repeat=3):
        if not any(all(a >= b for a, b in zip(e, l)) for l in leads):
            count += 1
    return count


@pytest.mark.parametrize("f,label", NORMAL_FORMS)
def test_normal_forms(f, label):
    assert classify_duval(P(f), N) == DuValType.parse(label)


@pytest.mark.parametrize("f,label", NORMAL_FORMS)
def test_milnor_number_matches_independent_oracle(f, label):
    t = DuValType.parse(label)
    assert global_milnor(P(f)) == t.index


@pytest.mark.parametrize("f,family", [
    ("x", "Smooth"), ("x+y^2", "Smooth"),
    ("x^3+y^3+z^3", "NotDuVal"), ("x^2+y^3+z^6", "NotDuVal"), ("x^2+y^4+z^4", "NotDuVal"),
    ("x^2+y^2", "Undetermined"), ("x^2+y^2*z", "Undetermined"),
])
def test_non_du_val_cases(f, family):
    assert classify_duval(P(f), N).family == family


def test_low_jet_order_is_undetermined():
    assert classify_duval(P("x^2+y^2*z+z^11"), 8).family == "Undetermined"
    assert classify_duval(P("x^2+y^3+z^5"), 4).family == "Undetermined"
    assert classify_duval(P("x^2+y^2+z^9"), 7).family == "Undetermined"


def test_d_index_certified_up_to_jet_order_minus_one():
    assert classify_duval(P("x^2+y^2*z+z^10"), N) == DuValType("D", 11)
    assert classify_duval(P("x^2+y^2*z+z^12"), N).family == "Undetermined"


def test_any_variable_names():
    assert classify_duval(P("u*v-w^4", UVW), N) == DuValType("A", 3)


def test_evidence_record():
    js = classify(P("x^2+y^2*z+z^5"), N).to_json()
    assert js["type"]["label"] == "D6" and js["milnor_number"] == 6 and js["order_sufficient"]


@pytest.mark.parametrize("F,G,expected", [
    ("y-x^2", "y", 2), ("y^2-x^3", "y", 3), ("y^2-x^3", "y^2-x^5", 6), ("x*y", "x+y", 2),
    ("y", "y*(x+1)", None),
])
def test_intersection_multiplicity(F, G, expected):
    V = ("x", "y")
    assert intersection_multiplicity(P(F, V), P(G, V), "x", "y") == expected


def test_truncated_intersection_multiplicity():
    V = ("x", "y")
    F, G = P("y^2-x^3", V), P("y^2-x^5", V)
    assert intersection_multiplicity(F, G, "x", "y", modulo=12) == 6
    assert intersection_multiplicity(F, G, "x", "y", modulo=5) is None


@given(invertible_linear(), st.sampled_from(NORMAL_FORMS[:6] + NORMAL_FORMS[10:14] + NORMAL_FORMS[-3:]),
       st.integers(-3, 3))
@settings(max_examples=25)
def test_type_invariant_under_changes_and_units(lin, row, c):
    f, label = row
    change = CoordinateChange(lin, V3)
    unit = MultiPoly.const(1, V3) + MultiPoly.var("x", V3).scale(c)
    g = unit.mul(change.apply(P(f), N), N)
    assert classify_duval(g, N) == DuValType.parse(label)


def test_type_parse_and_labels():
    assert DuValType.parse("d7") == DuValType("D", 7)
    assert DuValType("Undetermined", 9).label == "Undetermined(N=9)"
    with pytest.raises(ValueError):
        DuValType("E", 9)
    assert duval.determinacy(DuValType("A", 4)) == 5
