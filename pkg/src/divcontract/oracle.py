"""Decision procedures for terminal divisorial contractions to a smooth curve.

The entry point is :func:`decide_contraction`.  It finds the Du Val type and
curve position of a general hyperplane section through the curve, dispatches
on the stratum, and, in the D strata, replays the decision on blow-up charts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import factors
from .blowup import (BlowupError, UnsupportedRegime, blowup_curve, qfactorialize,
                     surface_blowup)
from .cycles import CurvePosition, CycleError, position_from_d
from .duval import DuValType, classify
from .germ import Germ3Fold
from .ideals import (DEFAULT_BUDGET, BudgetExceeded, BudgetMeter, GroebnerBudget, PolyIdeal,
                     contains_all, product, symbolic_power)
from .jets import CoordinateChange, compose, weierstrass_prepare
from .normal_form import NormalFormError, WrongStratum, normalize, normalize_A3_middle
from .poly import MultiPoly

KINDS = ("NoDuValSection", "CanonicalOnly", "Terminal", "Undetermined")


class OracleError(RuntimeError):
    pass


class InconclusiveSampling(OracleError):
    """The section sweep ran out of budget before it stabilised."""


class CrossCheckError(OracleError):
    """The cubic criterion and the chart computation disagree."""

    def __init__(self, message: str, record: "CrossCheck"):
        super().__init__(message)
        self.record = record


class OutsideHypotheses(OracleError):
    pass


# genericity ------------------------------------------------------------------

class GenericityOrder:
    """Total order on section types: smaller is more generic.

    Smooth < A_1 < A_2 < ... < D_4 < D_5 < ... < E_6 < E_7 < E_8
    < Undetermined < NotDuVal.
    """

    _RANK = {"Smooth": 0, "A": 1, "D": 2, "E": 3, "Undetermined": 4, "NotDuVal": 5}

    @classmethod
    def key(cls, t: DuValType) -> tuple[int, int]:
        idx = t.index if t.family in ("A", "D", "E") else 0
        return cls._RANK[t.family], idx

    @classmethod
    def less(cls, a: DuValType, b: DuValType) -> bool:
        return cls.key(a) < cls.key(b)


# section samples --------------------------------------------------------------

@dataclass(frozen=True)
class SectionSample:
    """The section cut by sum(coeffs[i] * gens[i]) = 0, a hyperplane containing the curve.

    ``section`` is a polynomial in the three variables left after solving
    the hyperplane for ``eliminated``; ``curve`` are the two generators of
    the curve inside it.
    """

    coeffs: tuple[int, int, int]
    eliminated: str
    section: MultiPoly
    curve: tuple[str, str]
    type: DuValType
    position: CurvePosition | None
    d: int | None

    @property
    def key(self) -> tuple:
        return GenericityOrder.key(self.type) + (self.d or 0,)

    def to_json(self) -> dict:
        out = {"hyperplane": list(self.coeffs), "eliminated": self.eliminated,
               "section": str(self.section), "curve": list(self.curve),
               "type": self.type.label}
        if self.position is not None:
            out["position"] = self.position.to_json()
        if self.d is not None:
            out["d"] = self.d
        return out


@dataclass(frozen=True)
class NoDuValSection:
    """Evidence that no hyperplane through the curve cuts a Du Val section."""

    samples: tuple[SectionSample, ...]
    square_certificate: dict

    def to_json(self) -> dict:
        return {"samples": [s.to_json() for s in self.samples],
                "square_certificate": self.square_certificate}


def _drop_var(p: MultiPoly, v: str) -> MultiPoly:
    if p.involves(v):
        raise OracleError(f"{v} was not eliminated")
    i = p.vars.index(v)
    vars = p.vars[:i] + p.vars[i + 1:]
    return MultiPoly({m[:i] + m[i + 1:]: c for m, c in p.terms.items()}, vars)


def _pulled(germ: Germ3Fold) -> MultiPoly:
    return germ.frame.pull(germ.F).truncate(germ.order)


def _hyperplane_image(coeffs: Sequence[int], targets: Sequence[str], vars) -> tuple[str, MultiPoly]:
    j = next(i for i, a in enumerate(coeffs) if a)
    expr = MultiPoly.zero(vars)
    for i, a in enumerate(coeffs):
        if i != j and a:
            expr = expr + MultiPoly.var(targets[i], vars).scale(Fraction(-a, coeffs[j]))
    return targets[j], expr


def sample_section(germ: Germ3Fold, coeffs: Sequence[int], G: MultiPoly | None = None) -> SectionSample:
    """Classify one hyperplane section through the curve."""
    coeffs = tuple(int(a) for a in coeffs)
    if not any(coeffs):
        raise ValueError("zero hyperplane")
    fr = germ.frame
    G = _pulled(germ) if G is None else G
    v, expr = _hyperplane_image(coeffs, fr.targets, germ.vars)
    S = _drop_var(compose(G, {v: expr}, germ.order), v)
    curve = tuple(t for t in fr.targets if t != v)
    cl = classify(S, germ.order)
    t = cl.type
    position, d = None, None
    if t.family in ("A", "D"):
        sb = surface_blowup(S, [MultiPoly.var(c, S.vars) for c in curve], germ.order)
        d = sb.d
        try:
            position = position_from_d(t, d, sb.transform_meets_singularity)
        except CycleError:
            position = None
    return SectionSample(coeffs, v, S, curve, t, position, d)


def _sweep_vectors(rng: random.Random, n: int, bound: int = 7) -> list[tuple[int, int, int]]:
    out = []
    while len(out) < n:
        v = tuple(rng.choice([k for k in range(-bound, bound + 1) if k]) for _ in range(3))
        if v not in out:
            out.append(v)
    return out


def a_type_attainable(germ: Germ3Fold) -> dict:
    """Whether some hyperplane through the curve cuts a section of quadratic rank >= 2.

    The hyperplane is written target_j = b*target_k + c*target_l for each j;
    the 2x2 minors of the restricted quadratic form are polynomials of degree
    at most 4 in b and c, so a 5x5 grid decides whether they vanish
    identically.
    """
    fr = germ.frame
    vars = germ.vars
    Q = _pulled(germ).homogeneous_part(2)
    for j, v in enumerate(fr.targets):
        k, l = [u for u in fr.targets if u != v]
        rest = tuple(u for u in vars if u != v)
        for b in range(5):
            for c in range(5):
                img = MultiPoly.var(k, vars).scale(b) + MultiPoly.var(l, vars).scale(c)
                q = compose(Q, {v: img}, None)
                if not factors.square_test_q2(q, rest):
                    return {"rank_two_attainable": True, "witness": {"solved": v, "b": b, "c": c}}
    return {"rank_two_attainable": False, "grid": "5x5 per solved coordinate"}


def find_general_section(germ: Germ3Fold, budget: int = 24, round_size: int = 3,
                         seed: int = 0) -> SectionSample | NoDuValSection:
    """Most generic section through the curve found by a deterministic sweep.

    Parameters
    ----------
    germ : Germ3Fold
    budget : int
        Maximal number of sampled hyperplanes.
    round_size : int
        Hyperplanes per round; the sweep stops when the best sample of two
        consecutive rounds has the same type and d.
    seed : int
        Seed of the integer coefficient generator (recorded by callers).

    Returns
    -------
    SectionSample or NoDuValSection

    Raises
    ------
    InconclusiveSampling
        The budget ran out first, or every sample was non Du Val while the
        square test leaves room for an A type.
    """
    if budget < 2 * round_size:
        raise ValueError("budget must cover at least two rounds")
    rng = random.Random(seed)
    G = _pulled(germ)
    samples: list[SectionSample] = []
    prev = None
    best = None
    for _ in range(budget // round_size):
        rnd = [sample_section(germ, v, G) for v in _sweep_vectors(rng, round_size)]
        samples.extend(rnd)
        rbest = min(rnd, key=lambda s: s.key)
        if best is None or rbest.key < best.key:
            best = rbest
        if prev is not None and prev.key == rbest.key:
            break
        prev = rbest
    else:
        raise InconclusiveSampling(f"no stable section type after {len(samples)} samples")
    if best.type.family == "NotDuVal":
        cert = a_type_attainable(germ)
        if cert["rank_two_attainable"]:
            raise InconclusiveSampling("all samples non Du Val, but a rank-two section is attainable")
        return NoDuValSection(tuple(samples), cert)
    if best.type.family == "Undetermined":
        raise InconclusiveSampling(f"section type undetermined at jet order {germ.order}")
    return best


# special sections ---------------------------------------------------------------

@dataclass(frozen=True)
class SectionConstraint:
    """What a special D_n section forces on the general one."""

    family: str
    position: str
    max_index: int | None = None
    even: bool = False

    def admits(self, s: SectionSample) -> bool:
        t = s.type
        if t.family != self.family or s.position is None:
            return False
        if self.position == "FD_l":
            return s.position.label in ("FD_l", "D4-symmetric") and t.index <= self.max_index
        if t.index == 4:
            return True
        return s.position.label == "FD_r" and (t.index % 2 == 0) == self.even

    def to_json(self) -> dict:
        out = {"family": self.family, "position": self.position}
        if self.max_index is not None:
            out["max_index"] = self.max_index
        if self.even:
            out["even"] = True
        return out


def lift_special_section(special: SectionSample) -> SectionConstraint:
    """Constraint on the general section implied by a special D_n section, n >= 5.

    A D_n section in position FD_l forces a general section D_m (m <= n) in
    position FD_l; an even D_n in position FD_r forces an even D in FD_r.
    """
    t = special.type
    if t.family != "D" or t.index < 5:
        raise OutsideHypotheses(f"needs a D_n section with n >= 5, got {t}")
    if special.position is None:
        raise OutsideHypotheses("position of the special section unknown")
    if special.position.label == "FD_l":
        return SectionConstraint("D", "FD_l", max_index=t.index)
    if special.position.label == "FD_r" and t.index % 2 == 0:
        return SectionConstraint("D", "FD_r", even=True)
    raise OutsideHypotheses(f"no constraint for {t} in position {special.position}")


# the cubic of an x^2 + f presentation ----------------------------------------------

@dataclass(frozen=True)
class SquarePresentation:
    """F = unit * ((p + A/2)^2 + f) with f free of the pivot p."""

    pivot: str
    f: MultiPoly
    rest: tuple[str, str, str]

    @property
    def f3(self) -> MultiPoly:
        return self.f.homogeneous_part(3)


def square_presentation(germ: Germ3Fold) -> SquarePresentation:
    """Complete the square on a germ whose quadratic part has rank one.

    The cubic part of the remainder is well defined up to linear changes of
    the other three coordinates, which is all the irreducibility and
    square-divisor tests need.
    """
    F = germ.F.truncate(germ.order)
    vars = germ.vars
    Q = F.homogeneous_part(2)
    M = factors.quadratic_matrix(Q, vars)
    if factors.quadratic_rank(Q, vars) != 1:
        raise WrongStratum("the quadratic part does not have rank one")
    i = next(k for k in range(4) if M[k][k] != 0)
    p = vars[i]
    img = MultiPoly.var(p, vars)
    for k, w in enumerate(vars):
        if k != i and M[i][k]:
            img = img - MultiPoly.var(w, vars).scale(M[i][k] / M[i][i])
    F1 = CoordinateChange({p: img}, vars).apply(F, germ.order)
    F1 = F1.scale(1 / M[i][i])
    _, A, B = weierstrass_prepare(F1, p, germ.order)
    f = (B - A.mul(A, germ.order).scale(Fraction(1, 4))).truncate(germ.order)
    return SquarePresentation(p, f, tuple(v for v in vars if v != p))


def d4_section_exists(germ: Germ3Fold) -> bool:
    """True iff some hyperplane through the curve cuts a D_4 section.

    Decided on the cubic f3 of the x^2 + f3 + f_{>=4} presentation: there is
    no D_4 section exactly when f3 = g * h^2 with h linear (f3 = 0 included).
    """
    sp = square_presentation(germ)
    return not factors.square_linear_divisor_exists(sp.f3, sp.rest)


# verdicts ---------------------------------------------------------------------

@dataclass(frozen=True)
class TerminalPayload:
    index: int | None
    index_interval: tuple[int, int]
    higher_index_points: str | None
    generator_degree_bound: int | None
    generator_degrees: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out = {"index_interval": list(self.index_interval)}
        if self.generator_degree_bound is not None:
            out["generator_degree_bound"] = self.generator_degree_bound
        if self.index is not None:
            out["index"] = self.index
        if self.higher_index_points is not None:
            out["higher_index_points"] = self.higher_index_points
        if self.generator_degrees is not None:
            out["generator_degrees"] = list(self.generator_degrees)
        return out


@dataclass(frozen=True)
class ChartVerdict:
    regime: str  # terminal-regime | canonical-only-regime | unsupported
    detail: str
    normalized: bool
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"regime": self.regime, "detail": self.detail, "normalized": self.normalized,
                **self.data}


@dataclass(frozen=True)
class CrossCheck:
    criterion: str  # Terminal | CanonicalOnly
    chart: ChartVerdict

    @property
    def agree(self) -> bool | None:
        if self.chart.regime == "unsupported":
            return None
        return (self.criterion == "Terminal") == (self.chart.regime == "terminal-regime")

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "chart": self.chart.to_json(), "agree": self.agree}


@dataclass(frozen=True)
class ContractionVerdict:
    """Outcome of :func:`decide_contraction`.

    ``payload`` is present exactly for Terminal verdicts.  ``stratum`` names
    the dispatch branch (for Undetermined it names the deferred case).
    """

    kind: str
    stratum: str
    section: SectionSample | None = None
    no_section: NoDuValSection | None = None
    payload: TerminalPayload | None = None
    cross_check: CrossCheck | None = None
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown verdict kind {self.kind}")
        if (self.payload is not None) != (self.kind == "Terminal"):
            raise ValueError("terminal payload present iff kind is Terminal")
        if self.cross_check is not None and self.cross_check.agree is False:
            raise CrossCheckError("criterion and chart verdicts disagree", self.cross_check)

    @property
    def is_terminal(self) -> bool:
        return self.kind == "Terminal"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "stratum": self.stratum, "evidence": self.evidence}
        if self.section is not None:
            out["section"] = self.section.to_json()
        if self.no_section is not None:
            out["no_du_val_section"] = self.no_section.to_json()
        if self.payload is not None:
            out["terminal"] = self.payload.to_json()
        if self.cross_check is not None:
            out["cross_check"] = self.cross_check.to_json()
        return out


def _chart_germ(germ: Germ3Fold) -> tuple[Germ3Fold, bool]:
    try:
        nf = normalize(germ)
    except (NormalFormError, ValueError):
        return germ, False
    vars = germ.vars
    I = PolyIdeal([MultiPoly.var(v, vars) for v in nf.curve], vars)
    return Germ3Fold(nf.F_normal.poly, I, germ.order), True


def verify_by_charts(germ: Germ3Fold, budget: GroebnerBudget = DEFAULT_BUDGET,
                     meter: BudgetMeter | None = None) -> ChartVerdict:
    """Decide the regime from the blow-up of the curve and the blow-up of E1.

    The germ is first brought to its D_n normal form when it is in shape for
    one.  Terminal regime means the singular locus of Z along the curve C
    over the origin is finite; a positive-dimensional singular locus along C
    means only a canonical contraction.
    """
    g, normalized = _chart_germ(germ)
    try:
        res = blowup_curve(g)
        q = qfactorialize(res, budget=budget, meter=meter)
    except UnsupportedRegime as exc:
        return ChartVerdict("unsupported", str(exc), normalized)
    except (BlowupError, BudgetExceeded) as exc:
        return ChartVerdict("unsupported", f"{type(exc).__name__}: {exc}", normalized)
    data = {"d": res.d, "C": [str(c) for c in q.C], "Z_strict": str(q.chart.strict),
            "sing_along_C": q.report.verdict, "sing_along_L": q.L_report.verdict}
    v = q.report.verdict
    if v in ("empty", "finite"):
        return ChartVerdict("terminal-regime", f"Sing Z along C is {v}", normalized, data)
    if v == "positive-dimensional":
        return ChartVerdict("canonical-only-regime", "Z is singular along C", normalized, data)
    return ChartVerdict("unsupported", f"singular locus {v}", normalized, data)


def _cubic_verdict(germ: Germ3Fold) -> tuple[bool, dict]:
    sp = square_presentation(germ)
    f3 = sp.f3
    irr = bool(f3) and factors.is_irreducible_cubic(f3, sp.rest)
    return irr, {"f3": str(f3), "f3_irreducible": irr, "pivot": sp.pivot}


def decide_contraction(germ: Germ3Fold, budget: int = 24, seed: int = 0,
                       groebner_budget: GroebnerBudget = DEFAULT_BUDGET,
                       cross_check: bool = True) -> ContractionVerdict:
    """Decide whether a terminal divisorial contraction to the curve exists.

    Parameters
    ----------
    germ : Germ3Fold
        A germ of multiplicity two containing the smooth curve.
    budget, seed : int
        Section sweep parameters, see :func:`find_general_section`.
    groebner_budget : GroebnerBudget
        Caps for the chart verifier.
    cross_check : bool
        Run :func:`verify_by_charts` in the D strata (default).

    Returns
    -------
    ContractionVerdict

    Raises
    ------
    InconclusiveSampling, CrossCheckError, WrongStratum
    """
    if germ.multiplicity != 2:
        raise OutsideHypotheses(f"germ has multiplicity {germ.multiplicity}, expected 2")
    sec = find_general_section(germ, budget, seed=seed)
    evidence: dict = {"seed": seed}
    if isinstance(sec, NoDuValSection):
        return ContractionVerdict("NoDuValSection", "no Du Val section", no_section=sec,
                                  evidence=evidence)
    t, pos = sec.type, sec.position
    if t.family == "E":
        return ContractionVerdict("Undetermined", f"{t.label} section", sec, evidence=evidence)
    if pos is None:
        raise OracleError(f"no curve position for {t} with d = {sec.d}")
    if t.family == "A":
        n, k = t.index, pos.k
        if pos.is_edge:
            payload = TerminalPayload(2 if n == 1 else None, (n + 1, 2 * n),
                                      "cA" if n == 1 else None, 2 * n)
            return ContractionVerdict("Terminal", f"A{n} edge", sec, payload=payload,
                                      evidence=evidence)
        if n == 3 and k == 2:
            return _decide_a3_middle(germ, sec, evidence)
        return ContractionVerdict("Undetermined", f"A{n} middle k={k}", sec, evidence=evidence)
    n = t.index
    if n == 4:
        irr, ev = _cubic_verdict(germ)
        evidence.update(ev)
        payload = TerminalPayload(2, (2, 2), "one cA_x point", 2, (1, 2)) if irr else None
        return _with_charts(germ, "D4", sec, payload, evidence, cross_check, groebner_budget)
    if pos.label == "FD_l":
        exists = d4_section_exists(germ)
        evidence["d4_section_exists"] = exists
        if exists:
            raise InconclusiveSampling("a D4 section exists but the sweep missed it")
        return _with_charts(germ, f"D{n} FD_l", sec, None, evidence, cross_check, groebner_budget)
    if n % 2:
        return ContractionVerdict("Undetermined", f"D{n} FD_r odd", sec, evidence=evidence)
    irr, ev = _cubic_verdict(germ)
    evidence.update(ev)
    payload = TerminalPayload(2, (2, 2), "one cD point", 2, (1, 2)) if irr else None
    return _with_charts(germ, f"D{n} FD_r", sec, payload, evidence, cross_check, groebner_budget)


def _with_charts(germ, stratum, sec, payload, evidence, cross_check, gb) -> ContractionVerdict:
    kind = "Terminal" if payload is not None else "CanonicalOnly"
    cc = CrossCheck(kind, verify_by_charts(germ, gb)) if cross_check else None
    return ContractionVerdict(kind, stratum, sec, payload=payload, cross_check=cc, evidence=evidence)


def _decide_a3_middle(germ: Germ3Fold, sec: SectionSample, evidence: dict) -> ContractionVerdict:
    nf = normalize_A3_middle(germ)
    f = nf.f_le3
    evidence["f_le3"] = str(f)
    if not f:
        # f_{<=3} = 0 is treated like a component through the origin
        evidence["proper_component_through_origin"] = True
        return ContractionVerdict("CanonicalOnly", "A3 middle", sec, evidence=evidence)
    rest = tuple(v for v in germ.vars if v != "y")
    comp = factors.proper_component_through_origin(f, rest)
    evidence["proper_component_through_origin"] = comp
    if comp:
        return ContractionVerdict("CanonicalOnly", "A3 middle", sec, evidence=evidence)
    payload = TerminalPayload(2, (2, 2), "cA", None)
    return ContractionVerdict("Terminal", "A3 middle", sec, payload=payload, evidence=evidence)


# generator degrees ----------------------------------------------------------------

@dataclass
class GeneratorCheck:
    passed: bool
    bound: int
    d_max: int
    failures: list[int]
    meter: BudgetMeter

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {"passed": self.passed, "bound": self.bound, "d_max": self.d_max,
                "failing_degrees": self.failures, "budget": self.meter.to_json()}


def check_generator_degrees(germ: Germ3Fold, bound: int, d_max: int = 4,
                            budget: GroebnerBudget = DEFAULT_BUDGET,
                            meter: BudgetMeter | None = None) -> GeneratorCheck:
    """Check that the symbolic Rees algebra is generated in degrees <= bound.

    For every bound < d <= d_max, I^(d) must equal the sum of the products
    I^(i) * I^(d-i), 1 <= i <= d/2, modulo F.  Symbolic powers are
    saturations along the parameter of the curve, so the germ must be
    polynomial with Sing X meeting the curve only at the origin.

    Raises
    ------
    BudgetExceeded
        The Groebner caps were hit (the check is inconclusive).
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    meter = meter or BudgetMeter(budget=budget)
    fr = germ.frame
    if not fr.exact:
        raise OutsideHypotheses("curve ideal is not straightened exactly by polynomials")
    along = fr.free[0]
    F = germ.F
    P = {1: symbolic_power(germ.I, 1, F, budget=budget, meter=meter)}
    failures = []
    for d in range(2, d_max + 1):
        P[d] = symbolic_power(germ.I, d, F, along=along, budget=budget, meter=meter)
        if d <= bound:
            continue
        gens = [F]
        for i in range(1, d // 2 + 1):
            gens.extend(product(P[i], P[d - i]).gens)
        if not contains_all(PolyIdeal(gens, germ.vars), P[d].gens, budget, meter):
            failures.append(d)
    return GeneratorCheck(not failures, bound, d_max, failures, meter)
