from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divcontract import cycles
from divcontract.cycles import CycleError, DynkinGraph, position_from_d, select_edge, solve_cycle
from divcontract.duval import DuValType

LABELS = [f"A{n}" for n in range(1, 13)] + [f"D{n}" for n in range(4, 13)] + ["E6", "E7", "E8"]


@pytest.mark.parametrize("label", LABELS)
def test_cartan_matrix_negative_definite(label):
    assert DynkinGraph.of(label).is_negative_definite()


@pytest.mark.parametrize("label,z", [
    ("A4", [1, 1, 1, 1]), ("D5", [1, 2, 2, 1, 1]),
    ("E6", [1, 2, 3, 2, 1, 2]), ("E7", [2, 3, 4, 3, 2, 1, 2]), ("E8", [2, 4, 6, 5, 4, 3, 2, 3]),
])
def test_fundamental_cycles(label, z):
    assert DynkinGraph.of(label).fundamental_cycle() == z


def test_coefficient_one_vertices():
    assert DynkinGraph.of("D6").coefficient_one_vertices() == [1, 5, 6]
    assert DynkinGraph.of("E6").coefficient_one_vertices() == [1, 5]
    assert DynkinGraph.of("E7").coefficient_one_vertices() == [6]
    assert DynkinGraph.of("E8").coefficient_one_vertices() == []


def test_cli_example_d7():
    sol = select_edge(DynkinGraph.of("D7"), 6)
    assert sol.exceptional == 7 and sol.d == 3
    assert [int(c) for c in sol.coefficients] == [1, 2, 3, 4, 5, 3, 3]


def test_e6_curve_and_meeting_errors():
    sol = select_edge(DynkinGraph.of("E6"), 1)
    assert sol.integral
    with pytest.raises(CycleError):
        select_edge(DynkinGraph.of("E6"), 3)
    with pytest.raises(CycleError):
        solve_cycle(DynkinGraph.of("A3"), 9, 1)


@given(st.sampled_from(LABELS[:-1]), st.data())
def test_solution_satisfies_defining_system(label, data):
    g = DynkinGraph.of(label)
    ones = g.coefficient_one_vertices()
    meeting = data.draw(st.sampled_from(ones))
    e = data.draw(st.sampled_from(ones))
    sol = solve_cycle(g, meeting, e)
    M = g.matrix()
    for i in range(g.n):
        z_dot = sum(M[i][j] * sol.coefficients[j] for j in range(g.n)) + (1 if i + 1 == meeting else 0)
        assert z_dot == (-1 if i + 1 == e else 0)


@given(st.integers(1, 12), st.data())
def test_a_chain_unique_integral_edge(n, data):
    k = data.draw(st.integers(1, n))
    g = DynkinGraph.of(f"A{n}")
    integral = [e for e in g.coefficient_one_vertices() if solve_cycle(g, k, e).integral]
    assert len(integral) == 1
    sol = select_edge(g, k)
    assert sol.d == min(k, n + 1 - k)
    assert [int(c) for c in sol.coefficients] == cycles.expected_coefficients(g.type, f"k={k}", k) or \
        [int(c) for c in sol.coefficients][::-1] == cycles.expected_coefficients(g.type, f"k={k}", k)


@pytest.mark.parametrize("n", range(5, 13))
def test_d_positions_match_closed_forms(n):
    g = DynkinGraph.of(f"D{n}")
    t = g.type
    assert [int(c) for c in select_edge(g, 1).coefficients] == cycles.expected_coefficients(t, "FD_l")
    assert [int(c) for c in select_edge(g, n - 1).coefficients] == cycles.expected_coefficients(t, "FD_r")


def test_position_from_d():
    assert position_from_d(DuValType("A", 5), 2).k == 2
    assert position_from_d(DuValType("D", 8), 4).label == "FD_r"
    assert position_from_d(DuValType("D", 8), 2).label == "FD_l"
    assert position_from_d(DuValType("D", 5), 2, True).label == "FD_r"
    with pytest.raises(CycleError):
        position_from_d(DuValType("D", 5), 2)
    with pytest.raises(CycleError):
        position_from_d(DuValType("D", 9), 3)


def test_fractional_solution_reported():
    sol = solve_cycle(DynkinGraph.of("D7"), 6, 6)
    assert not sol.integral
    assert Fraction(1, 2) in [c - int(c) for c in sol.coefficients]
