"""Blow-ups of smooth curves on hypersurface germs, computed in affine charts.

The curve is first straightened so that its ideal is generated by
coordinates (the "targets"); the remaining coordinate ``s`` runs along the
curve.  In the chart where the target ``e`` generates the pulled-back ideal,
the other targets g are replaced by g*e.  The exceptional divisor of the
ambient blow-up is e = 0, and on the strict transform it splits as
``s^d * h``: the plane s = 0 over the origin (E2, multiplicity d) and the
divisor h = 0 dominating the curve (E1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .duval import SurfaceGerm
from .germ import CurveFrame, Germ3Fold, GermError, frame
from .ideals import (BudgetExceeded, BudgetMeter, DEFAULT_BUDGET, GroebnerBudget, PolyIdeal,
                     contains, dimension, groebner, has_common_zero)
from .jets import DEFAULT_ORDER, compose
from .poly import MultiPoly


class BlowupError(ValueError):
    pass


class UnsupportedRegime(BlowupError):
    pass


@dataclass
class BlowupChart:
    """One affine chart of a blow-up.

    ``total == exceptional_var^multiplicity * strict`` holds exactly.
    """

    index: int
    exceptional_var: str
    substitutions: dict[str, str]
    total: MultiPoly
    strict: MultiPoly
    multiplicity: int
    exceptional_restriction: MultiPoly
    d: int
    h: MultiPoly
    free: str
    exact: bool

    @property
    def vars(self) -> tuple[str, ...]:
        return self.strict.vars

    def pullback_identity_holds(self) -> bool:
        e = MultiPoly.var(self.exceptional_var, self.vars)
        return e.pow(self.multiplicity) * self.strict == self.total

    def to_json(self) -> dict:
        return {"chart": self.index, "exceptional_var": self.exceptional_var,
                "substitutions": self.substitutions, "strict_transform": str(self.strict),
                "exceptional_restriction": str(self.exceptional_restriction),
                "multiplicity": self.multiplicity, "d": self.d, "E1_factor": str(self.h)}


@dataclass
class ExceptionalDecomposition:
    """Chart-local equations of E1, E2 and L = E1 . E2 in the given chart."""

    chart: int
    d: int
    E1: PolyIdeal
    E2: PolyIdeal | None
    L: PolyIdeal | None

    def to_json(self) -> dict:
        return {"chart": self.chart, "d": self.d, "E1": [str(g) for g in self.E1],
                "E2": None if self.E2 is None else [str(g) for g in self.E2],
                "L": None if self.L is None else [str(g) for g in self.L]}


@dataclass
class SingularLocusReport:
    locus: PolyIdeal
    verdict: str
    dimension: int | None
    witness: list[str] = field(default_factory=list)
    exact: bool = True

    VERDICTS = ("empty", "finite", "positive-dimensional", "undecided-at-budget")

    def to_json(self) -> dict:
        return {"locus": [str(g) for g in self.locus], "verdict": self.verdict,
                "dimension": self.dimension, "witness": self.witness, "exact": self.exact}


@dataclass
class BlowupResult:
    germ_vars: tuple[str, ...]
    frame: CurveFrame
    charts: list[BlowupChart]
    decomposition: ExceptionalDecomposition

    @property
    def d(self) -> int:
        return self.decomposition.d

    def chart(self, exceptional_var: str) -> BlowupChart:
        for c in self.charts:
            if c.exceptional_var == exceptional_var:
                return c
        raise KeyError(exceptional_var)

    def to_json(self) -> dict:
        return {"d": self.d, "E2_present": self.decomposition.E2 is not None,
                "curve_coordinates": {"targets": list(self.frame.targets),
                                      "along": list(self.frame.free),
                                      "change": self.frame.change.to_json()},
                "charts": [c.to_json() for c in self.charts],
                "decomposition": self.decomposition.to_json()}


def _chart(G: MultiPoly, fr: CurveFrame, index: int, e: str, order: int | None) -> BlowupChart:
    vars = G.vars
    ev = MultiPoly.var(e, vars)
    images = {g: MultiPoly.var(g, vars) * ev for g in fr.targets if g != e}
    total = compose(G, images, None)
    mu = fr.in_curve_ideal_order(G)
    if mu is None:
        raise BlowupError("the hypersurface equation vanishes identically")
    strict = total.divide_by_var_power(e, mu)
    restr = strict.subs_const({e: 0})
    s = fr.free[0]
    d = restr.var_adic_order(s)
    if d is None:
        raise BlowupError("exceptional restriction vanishes: curve ideal is not a regular sequence on F")
    h = restr.divide_by_var_power(s, d)
    subs = {g: f"{g}*{e}" for g in fr.targets if g != e}
    return BlowupChart(index, e, subs, total, strict, mu, restr, d, h, s, fr.exact and order is None)


def _pulled(F: MultiPoly, fr: CurveFrame, order: int) -> MultiPoly:
    G = fr.pull(F)
    return G if fr.exact else G.truncate(order)


def blowup_curve(germ: Germ3Fold) -> BlowupResult:
    """Blow up X along the curve in all three charts.

    Parameters
    ----------
    germ : Germ3Fold
        X = (F = 0) with a smooth curve Gamma contained in it.

    Returns
    -------
    BlowupResult
        Three charts (one per generator of the straightened curve ideal), and
        the decomposition E1 + d*E2 read in the first chart.  The value d is
        checked to agree across the charts.
    """
    fr = germ.frame
    G = _pulled(germ.F, fr, germ.order)
    charts = [_chart(G, fr, i, e, None if fr.exact else germ.order) for i, e in enumerate(fr.targets)]
    ds = {c.d for c in charts}
    if len(ds) != 1:
        raise BlowupError(f"exceptional multiplicity differs across charts: {sorted(ds)}")
    return BlowupResult(germ.vars, fr, charts, _decomposition(charts[0]))


def _decomposition(c: BlowupChart) -> ExceptionalDecomposition:
    vars = c.vars
    e = MultiPoly.var(c.exceptional_var, vars)
    s = MultiPoly.var(c.free, vars)
    E1 = PolyIdeal([e, c.h], vars)
    if c.d == 0:
        return ExceptionalDecomposition(c.index, 0, E1, None, None)
    return ExceptionalDecomposition(c.index, c.d, E1, PolyIdeal([e, s], vars),
                                    PolyIdeal([e, s, c.h.subs_const({c.free: 0})], vars))


# surfaces ------------------------------------------------------------------

@dataclass
class SurfaceBlowup:
    """Blow-up of a surface germ along a smooth curve: Gamma' + d*E."""

    d: int
    charts: list[BlowupChart]
    transform_meets_singularity: bool

    @property
    def has_exceptional_curve(self) -> bool:
        return self.d >= 1

    def to_json(self) -> dict:
        return {"d": self.d, "exceptional_curve": self.has_exceptional_curve,
                "singular_point_on_curve_transform": self.transform_meets_singularity,
                "charts": [c.to_json() for c in self.charts]}


def surface_blowup(S: SurfaceGerm | MultiPoly, gens: Sequence[MultiPoly],
                   order: int = DEFAULT_ORDER) -> SurfaceBlowup:
    """Blow up a surface germ f = 0 in C^3 along a smooth curve V(g1, g2).

    Returns the multiplicity d of the exceptional curve over the origin in
    the pullback of the curve, and whether the blown-up surface is singular
    at a point where the transform of the curve meets the exceptional curve.
    """
    f = S.f if isinstance(S, SurfaceGerm) else S
    if isinstance(S, SurfaceGerm):
        order = S.order
    if len(f.vars) != 3 or len(gens) != 2:
        raise BlowupError("expected a surface in C^3 and two curve generators")
    gens = [g.embed(f.vars) if g.vars != f.vars else g for g in gens]
    fr = frame(gens, order)
    G = _pulled(f, fr, order)
    if not G.truncate(order) or G.subs_const({v: 0 for v in fr.targets}).truncate(order):
        raise GermError("the surface does not contain the curve")
    charts = [_chart(G, fr, i, e, None if fr.exact else order) for i, e in enumerate(fr.targets)]
    ds = {c.d for c in charts}
    if len(ds) != 1:
        raise BlowupError(f"exceptional multiplicity differs across charts: {sorted(ds)}")
    d = ds.pop()
    meets = False
    if d >= 1:
        for c in charts:
            vars = c.vars
            sys = [c.strict] + [c.strict.diff(v) for v in vars] + [
                MultiPoly.var(c.exceptional_var, vars), MultiPoly.var(c.free, vars), c.h]
            if has_common_zero(PolyIdeal(sys, vars)):
                meets = True
                break
    return SurfaceBlowup(d, charts, meets)


# singular loci ---------------------------------------------------------------

def singular_locus_along(chart: BlowupChart | MultiPoly, locus: PolyIdeal,
                         budget: GroebnerBudget = DEFAULT_BUDGET,
                         meter: BudgetMeter | None = None) -> SingularLocusReport:
    """Dimension of Sing(strict transform) intersected with a locus.

    The locus must lie on the strict transform (checked by ideal membership).
    A budget overrun gives the verdict ``undecided-at-budget``.
    """
    F = chart.strict if isinstance(chart, BlowupChart) else chart
    exact = chart.exact if isinstance(chart, BlowupChart) else True
    locus = PolyIdeal([g.embed(F.vars) if g.vars != F.vars else g for g in locus.gens], F.vars)
    try:
        if not contains(locus, F, budget, meter):
            raise BlowupError("the locus does not lie on the strict transform")
        J = PolyIdeal([F] + [F.diff(v) for v in F.vars] + list(locus.gens), F.vars)
        dim = dimension(J, budget, meter)
        basis = groebner(J, budget=budget, meter=meter)
    except BudgetExceeded:
        return SingularLocusReport(locus, "undecided-at-budget", None, [], exact)
    verdict = "empty" if dim < 0 else "finite" if dim == 0 else "positive-dimensional"
    return SingularLocusReport(locus, verdict, dim, [str(g) for g in basis.gens], exact)


@dataclass
class QFactorialization:
    chart: BlowupChart
    C: PolyIdeal
    report: SingularLocusReport
    L_report: SingularLocusReport

    @property
    def singular_along_C(self) -> bool:
        return self.report.verdict == "positive-dimensional"

    def to_json(self) -> dict:
        return {"Z_chart": self.chart.to_json(), "C": [str(g) for g in self.C],
                "singular_along_C": self.singular_along_C,
                "report": self.report.to_json(), "L_report": self.L_report.to_json()}


def _e1_coordinate(c: BlowupChart) -> str:
    """The chart coordinate l with E1 = (e, l), when h is a multiple of one."""
    h = c.h
    if len(h.terms) == 1:
        (m, _), = h.terms.items()
        if sum(m) == 1:
            return h.vars[m.index(1)]
    raise UnsupportedRegime(f"E1 is not a coordinate hyperplane in this chart (h = {h})")


def _origin_smooth(c: BlowupChart) -> bool:
    # charts whose origin is a singular point of Y come first
    g = c.strict
    zero = {v: 0 for v in g.vars}
    return bool(g.subs_const(zero)) or any(bool(g.diff(v).subs_const(zero)) for v in g.vars)


def qfactorialize(result: BlowupResult, chart: str | None = None,
                  budget: GroebnerBudget = DEFAULT_BUDGET,
                  meter: BudgetMeter | None = None) -> QFactorialization:
    """Blow up E1 on Y in the chart where E1 = (e, l), l a coordinate.

    Only supported when Y has finitely many singular points on L in that
    chart.  The Z chart is l -> l*e with e divided out; C is the line of l
    over the chart origin, and the report gives Sing(Z) along C.
    """
    if result.d == 0:
        raise UnsupportedRegime("no exceptional plane: nothing to do")
    cands = [result.chart(chart)] if chart else sorted(result.charts, key=_origin_smooth)
    last_err = None
    for c in cands:
        try:
            l = _e1_coordinate(c)
        except UnsupportedRegime as exc:
            last_err = exc
            continue
        vars = c.vars
        L = PolyIdeal([MultiPoly.var(c.exceptional_var, vars), MultiPoly.var(c.free, vars),
                       MultiPoly.var(l, vars)], vars)
        try:
            L_rep = singular_locus_along(c, L, budget, meter)
        except BlowupError as exc:
            last_err = UnsupportedRegime(f"L is not on Y in chart {c.exceptional_var}: {exc}")
            continue
        if L_rep.verdict in ("positive-dimensional", "undecided-at-budget"):
            raise UnsupportedRegime(f"Y is not finitely singular along L ({L_rep.verdict})")
        ev = MultiPoly.var(c.exceptional_var, vars)
        total = compose(c.strict, {l: MultiPoly.var(l, vars) * ev}, None)
        k = total.var_adic_order(c.exceptional_var)
        strict = total.divide_by_var_power(c.exceptional_var, k)
        restr = strict.subs_const({c.exceptional_var: 0})
        z = BlowupChart(c.index, c.exceptional_var, {l: f"{l}*{c.exceptional_var}"}, total,
                        strict, k, restr, 0, restr, c.free, c.exact)
        C = PolyIdeal([MultiPoly.var(v, vars) for v in vars if v != l], vars)
        try:
            rep = singular_locus_along(z, C, budget, meter)
        except BlowupError as exc:
            last_err = UnsupportedRegime(f"C is not on Z in chart {c.exceptional_var}: {exc}")
            continue
        return QFactorialization(z, C, rep, L_rep)
    raise last_err or UnsupportedRegime("no chart with E1 a coordinate hyperplane")


# multiplicity drop -----------------------------------------------------------

def _valuation_weights(c: BlowupChart) -> tuple[int, int]:
    """Values (v(e), v(s)) of the divisorial valuation of E2 on the strict transform.

    Read from the lower Newton edge of the strict transform in (e, s) through
    the vertex s^d; coefficients are treated as generic units on E2.
    """
    vars = c.vars
    ie, is_ = vars.index(c.exceptional_var), vars.index(c.free)
    d = c.d
    pts = {(m[ie], m[is_]) for m in c.strict.terms}
    slope = Fraction(0)
    for i, j in pts:
        if i > 0 and j < d:
            slope = max(slope, Fraction(d - j, i))
    if slope == 0:
        raise BlowupError("strict transform contains E2 with multiplicity; not normal")
    p, q = slope.numerator, slope.denominator
    g = gcd(p, q)
    return p // g, q // g


def multiplicity_drop(germ: Germ3Fold, section: MultiPoly | None = None) -> int:
    """Coefficient a of E2 in the pullback of a hyperplane section through P.

    The section passes through the origin but does not contain the curve
    (a section containing it picks up all of E1 + d*E2).  By default a fixed
    generic combination is used.  On a germ of multiplicity m one expects
    a = m - 1.
    """
    res = blowup_curve(germ)
    if res.d == 0:
        return 0
    c = res.charts[0]
    fr = res.frame
    vars = germ.vars
    if section is None:
        coeffs = [2, 3, 5, 7]
        section = sum((MultiPoly.var(v, vars).scale(k) for v, k in zip(vars, coeffs)),
                      MultiPoly.zero(vars))
    if section.constant_term() != 0:
        raise BlowupError("the section does not pass through the origin")
    H = _pulled(section, fr, germ.order)
    if not H.subs_const({v: 0 for v in fr.targets}).truncate(germ.order):
        raise BlowupError("the section contains the curve")
    ev = MultiPoly.var(c.exceptional_var, vars)
    Hc = compose(H, {g: MultiPoly.var(g, vars) * ev for g in fr.targets if g != c.exceptional_var}, None)
    ve, vs = _valuation_weights(c)
    ie, is_ = vars.index(c.exceptional_var), vars.index(c.free)
    return min(m[ie] * ve + m[is_] * vs for m in Hc.terms)
