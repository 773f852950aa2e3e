import pytest
from hypothesis import given, settings

from divcontract.ideals import (BudgetExceeded, GroebnerBudget, PolyIdeal, contains, dimension,
                                groebner, has_common_zero, has_isolated_singularity, intersect,
                                origin_is_isolated, power, product, saturate, saturate_by,
                                symbolic_power)
from divcontract.poly import MultiPoly, parse_poly
from strategies import V3, polys

V4 = ("x", "y", "z", "t")


def I3(*gens):
    return PolyIdeal([parse_poly(g, V3) for g in gens], V3)


def I4(*gens):
    return PolyIdeal([parse_poly(g, V4) for g in gens], V4)


def test_groebner_example():
    G = groebner(I3("x^2-y", "x*y-z"))
    assert contains(G, parse_poly("x^3-z", V3))
    assert not contains(G, parse_poly("x", V3))


@pytest.mark.parametrize("gens,expected", [
    (("x", "y"), True),
    (("x", "x-1"), False),
    (("x^2+y^2+1", "x", "y"), False),
    (("x^2+y^2+1", "x"), True),  # complex points count
    (("x*y-1", "x"), False),
])
def test_has_common_zero(gens, expected):
    assert has_common_zero(I3(*gens)) is expected


@pytest.mark.parametrize("gens,dim", [(("x",), 2), (("x", "y"), 1), (("x", "y", "z"), 0),
                                      (("x", "x-1"), -1)])
def test_dimension(gens, dim):
    assert dimension(I3(*gens)) == dim


def test_saturation_removes_embedded_component():
    I = I3("x^2", "x*y")
    sat = saturate_by(I, parse_poly("y", V3))
    assert contains(sat, parse_poly("x", V3))
    J = I3("x^2", "x*y", "x*z")
    assert saturate(J, I3("x", "y", "z")).gens == groebner(I3("x")).gens


@given(polys(max_terms=3, min_order=1))
@settings(max_examples=15)
def test_saturation_contains_ideal(g):
    I = PolyIdeal([g * parse_poly("y", V3) + parse_poly("x^2", V3)], V3)
    sat = saturate_by(I, parse_poly("z+1", V3))
    for f in I.gens:
        assert contains(sat, f)


def test_intersection_and_product():
    I, J = I3("x"), I3("y")
    assert contains(intersect(I, J), parse_poly("x*y", V3))
    assert not contains(intersect(I, J), parse_poly("x", V3))
    assert product(I, J).gens == (parse_poly("x*y", V3),)
    assert len(power(I3("x", "y"), 3).gens) == 4


def test_symbolic_power_of_curve_on_A1_cone():
    # x y = z^2 with the line x = z = 0: the square of the ideal is not saturated
    F = parse_poly("x*y-z^2", V3)
    P2 = symbolic_power(I3("x", "z"), 2, F)
    assert contains(P2, parse_poly("x", V3))
    assert symbolic_power(I3("x", "z"), 2, F, along="y").gens == P2.gens


def test_origin_isolation():
    assert origin_is_isolated(I3("x^2+y^2+z^2", "x", "y"))
    assert not origin_is_isolated(I3("x", "y"))
    assert has_isolated_singularity(parse_poly("x^2+y^2+z^3", V3))
    assert not has_isolated_singularity(parse_poly("x^2+y^2", V3))


def test_budget_exceeded_is_raised():
    tiny = GroebnerBudget(max_basis=1)
    with pytest.raises(BudgetExceeded):
        groebner(I3("x^2-y", "y^2-z", "x*z-1"), budget=tiny)
