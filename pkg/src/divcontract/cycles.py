"""Dynkin graphs, exceptional cycles and the edge selected by integrality."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .duval import DuValType


class CycleError(ValueError):
    pass


@dataclass(frozen=True)
class DynkinGraph:
    """ADE dual graph with vertices E_1..E_n (numbered from 1).

    A_n is the chain; D_n is the chain E_1..E_{n-2} with E_{n-1} and E_n both
    attached to E_{n-2}; E_n is the chain E_1..E_{n-1} with E_n attached to E_3.
    """

    type: DuValType
    edges: tuple[tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        t = self.type
        if not t.is_du_val:
            raise CycleError(f"{t} has no Dynkin graph")
        n = t.index
        if t.family == "A":
            edges = [(i, i + 1) for i in range(1, n)]
        elif t.family == "D":
            edges = [(i, i + 1) for i in range(1, n - 2)] + [(n - 2, n - 1), (n - 2, n)]
        else:
            edges = [(i, i + 1) for i in range(1, n - 1)] + [(3, n)]
        object.__setattr__(self, "edges", tuple(edges))

    @classmethod
    def of(cls, label: str | DuValType) -> "DynkinGraph":
        return cls(label if isinstance(label, DuValType) else DuValType.parse(label))

    @property
    def n(self) -> int:
        return self.type.index

    @property
    def vertices(self) -> list[int]:
        return list(range(1, self.n + 1))

    def matrix(self) -> list[list[int]]:
        n = self.n
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            M[i][i] = -2
        for a, b in self.edges:
            M[a - 1][b - 1] = M[b - 1][a - 1] = 1
        return M

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def is_negative_definite(self) -> bool:
        minors = linalg.leading_minors(self.matrix())
        return all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(minors))

    def fundamental_cycle(self) -> list[int]:
        """Smallest nonzero Z >= 0 with Z.E_i <= 0 for all i (Laufer's algorithm)."""
        M = self.matrix()
        n = self.n
        z = [1] * n
        while True:
            bad = next((i for i in range(n) if sum(M[i][j] * z[j] for j in range(n)) > 0), None)
            if bad is None:
                return z
            z[bad] += 1

    def coefficient_one_vertices(self) -> list[int]:
        return list(_coefficient_one(self.type.label))


@dataclass(frozen=True)
class CycleSolution:
    graph: DynkinGraph
    meeting: int
    exceptional: int
    coefficients: tuple[Fraction, ...]

    @property
    def integral(self) -> bool:
        return all(c.denominator == 1 and c >= 0 for c in self.coefficients)

    @property
    def d(self) -> Fraction:
        return self.coefficients[self.exceptional - 1]

    def to_json(self) -> dict:
        return {
            "type": self.graph.type.label,
            "meeting": f"E{self.meeting}",
            "E": f"E{self.exceptional}",
            "d": _num(self.d),
            "coefficients": [_num(c) for c in self.coefficients],
            "integral": self.integral,
        }


def _num(c: Fraction):
    return int(c) if c.denominator == 1 else str(c)


def _check_meeting(graph: DynkinGraph, v: int) -> None:
    if v not in graph.vertices:
        raise CycleError(f"E{v} is not a vertex of {graph.type}")
    if v not in graph.coefficient_one_vertices():
        raise CycleError(f"a smooth curve cannot meet E{v} on {graph.type}")


@lru_cache(maxsize=None)
def _coefficient_one(label: str) -> tuple[int, ...]:
    z = DynkinGraph.of(label).fundamental_cycle()
    return tuple(i + 1 for i, c in enumerate(z) if c == 1)


@lru_cache(maxsize=None)
def _cartan_inverse(label: str) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(r) for r in linalg.inverse(DynkinGraph.of(label).matrix()))


def solve_cycle(graph: DynkinGraph, meeting: int, exceptional: int) -> CycleSolution:
    """Solve Z.E = -1 and Z.E_i = 0 (i != E) for Z = curve + sum a_i E_i.

    The curve contributes +1 to the row of the meeting vertex.
    """
    _check_meeting(graph, meeting)
    if exceptional not in graph.vertices:
        raise CycleError(f"E{exceptional} is not a vertex of {graph.type}")
    inv = _cartan_inverse(graph.type.label)
    a = [-(row[meeting - 1] + row[exceptional - 1]) for row in inv]
    return CycleSolution(graph, meeting, exceptional, tuple(a))


def select_edge(graph: DynkinGraph, meeting: int) -> CycleSolution:
    """The unique hypothesis E (a coefficient-one vertex) giving an integral cycle."""
    _check_meeting(graph, meeting)
    sols = [solve_cycle(graph, meeting, e) for e in graph.coefficient_one_vertices()]
    good = [s for s in sols if s.integral]
    if len(good) != 1:
        raise CycleError(f"{len(good)} integral solutions for {graph.type} meeting E{meeting}")
    return good[0]


@dataclass(frozen=True)
class CurvePosition:
    """Where the transform of the curve meets the exceptional graph.

    ``label`` is ``"k=<k>"`` for A_n, ``"FD_l"``, ``"FD_r"`` or ``"D4-symmetric"``.
    """

    type: DuValType
    label: str
    k: int | None = None

    @property
    def is_edge(self) -> bool:
        if self.type.family == "A":
            return self.k == 1
        return True

    def meeting_vertex(self) -> int:
        n = self.type.index
        if self.type.family == "A":
            return self.k
        if self.label in ("FD_l", "D4-symmetric"):
            return 1
        return n - 1

    def to_json(self) -> dict:
        out = {"label": self.label, "edge": self.is_edge}
        if self.k is not None:
            out["k"] = self.k
        return out

    def __str__(self):
        return self.label


def position_from_d(t: DuValType, d: int, singular_along_transform: bool | None = None) -> CurvePosition:
    """Invert the d-table: A_n gives k = d, D_n gives FD_l or FD_r.

    For D_5 both positions have d = 2; ``singular_along_transform`` (whether
    the blown-up section is singular along the curve's transform) tells them
    apart, FD_r being the singular one.
    """
    d = int(d)
    if t.family == "A":
        n = t.index
        if not 1 <= d <= (n + 1) // 2:
            raise CycleError(f"d = {d} impossible for {t}")
        return CurvePosition(t, f"k={d}", d)
    if t.family == "D":
        n = t.index
        if n == 4:
            if d != 2:
                raise CycleError(f"d = {d} impossible for D4")
            return CurvePosition(t, "D4-symmetric")
        fd_r = n // 2 if n % 2 == 0 else (n - 1) // 2
        if d == 2 and fd_r == 2:
            if singular_along_transform is None:
                raise CycleError("D5 with d = 2 needs the transform's singularity flag")
            return CurvePosition(t, "FD_r" if singular_along_transform else "FD_l")
        if d == 2:
            return CurvePosition(t, "FD_l")
        if d == fd_r:
            return CurvePosition(t, "FD_r")
        raise CycleError(f"d = {d} impossible for {t}")
    raise CycleError(f"no curve position table for {t}")


def expected_coefficients(t: DuValType, position: str, k: int | None = None) -> list[int]:
    """Closed-form total-transform coefficients (independent of the solver).

    For A_n the position k may be given on either side of the chain.  For the
    FD_r positions the coefficients grow linearly along the long arm:
    a_i = i for i <= n-2.
    """
    n = t.index
    if t.family == "A":
        k = min(k, n + 1 - k)
        return [min(i, k, n + 1 - i) for i in range(1, n + 1)]
    if position in ("FD_l", "D4-symmetric"):
        return [2] * (n - 2) + [1, 1]
    if n % 2 == 0:
        return list(range(1, n - 1)) + [n // 2, (n - 2) // 2]
    return list(range(1, n - 1)) + [(n - 1) // 2, (n - 1) // 2]
