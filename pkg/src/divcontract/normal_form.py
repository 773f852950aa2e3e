"""Normal forms for a smooth curve on a D_n or A_3 section of a cDV germ.

Every reduction is a sequence of explicit substitutions and multiplications
by units.  The result carries the composite change and the accumulated unit
so that ``unit * (F o change) == F_normal`` can be replayed at jet order N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import factors
from .blowup import surface_blowup
from .duval import DuValType, classify_duval
from .germ import Germ3Fold, GermError
from .ideals import PolyIdeal
from .jets import (CoordinateChange, Jet, NotPrepared, compose, unit_inverse, unit_power,
                   weierstrass_prepare)
from .poly import MultiPoly

FORM_TAGS = ("D_FDl", "D_FDl_n5plus", "D_FDr_even", "D_FDr_odd_a", "D_FDr_odd_b", "A3_middle")


class NormalFormError(ValueError):
    pass


class NotInShape(NormalFormError):
    """The t = 0 section or the curve ideal is not in the expected shape."""


class WrongStratum(NormalFormError):
    """The germ is not in the stratum the requested form describes."""


class JetOrderInsufficient(NormalFormError):
    pass


# monomial families -----------------------------------------------------------

@dataclass(frozen=True)
class MonomialFamily:
    """A named set of monomials in (x, y, z, t) that a normal form excludes."""

    name: str
    test: Callable[[dict], bool]

    def hits(self, F: MultiPoly) -> list[str]:
        out = []
        for m in F.sorted_monomials():
            e = dict(zip(F.vars, m))
            if self.test(e):
                out.append(str(MultiPoly({m: F.terms[m]}, F.vars)))
        return out


def _e(e: dict, **want) -> bool:
    return all(e.get(v, 0) == want.get(v, 0) for v in e)


FAMILIES = {
    "x outside x^2": MonomialFamily("x outside x^2", lambda e: e["x"] >= 1 and not _e(e, x=2)),
    "t*y^k": MonomialFamily("t*y^k", lambda e: e["t"] == 1 and e["x"] == 0 and e["z"] == 0 and e["y"] >= 1),
    "t*z^k": MonomialFamily("t*z^k", lambda e: e["t"] == 1 and e["x"] == 0 and e["y"] == 0 and e["z"] >= 1),
    "t*(quadratic)": MonomialFamily("t*(quadratic)", lambda e: e["t"] >= 1 and sum(e.values()) == 3),
    "t*y*z": MonomialFamily("t*y*z", lambda e: _e(e, t=1, y=1, z=1)),
    "t*y^2": MonomialFamily("t*y^2", lambda e: _e(e, t=1, y=2)),
    "y in tail": MonomialFamily("y in tail", lambda e: e["y"] >= 1 and e["t"] >= 1),
}


def _odd_x_family(m: int, variant: str) -> MonomialFamily:
    def test(e):
        if e["x"] == 0:
            return False
        if _e(e, x=2) or _e(e, x=1, z=m):
            return False
        if variant == "a":
            return not (e["x"] == 1 and e["t"] == 1 and e["y"] == 0 and e["z"] >= 1)
        return not (e["x"] == 1 and e["t"] >= 1 and e["y"] == 0)
    label = "x outside x^2, x*z^m, t*x*z^k" if variant == "a" else "x outside x^2, x*z^m, t*x*(z,t)"
    return MonomialFamily(label, test)


# results --------------------------------------------------------------------

@dataclass
class NormalFormResult:
    form_tag: str
    F_normal: Jet
    change: CoordinateChange
    unit: MultiPoly
    excluded: list[MonomialFamily]
    curve: tuple[str, ...]
    n: int | None = None
    steps: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    f_le3: MultiPoly | None = None

    @property
    def excluded_monomials(self) -> list[str]:
        return [f.name for f in self.excluded]

    def violations(self) -> dict[str, list[str]]:
        return {f.name: f.hits(self.F_normal.poly) for f in self.excluded if f.hits(self.F_normal.poly)}

    def certificate_holds(self, F: MultiPoly) -> bool:
        N = self.F_normal.order
        lhs = self.unit.mul(self.change.apply(F, N), N)
        return lhs == self.F_normal.poly

    def to_json(self) -> dict:
        out = {"form": self.form_tag, "F_normal": str(self.F_normal.poly),
               "jet_order": self.F_normal.order, "curve": list(self.curve),
               "change": self.change.to_json(), "unit": str(self.unit),
               "excluded_monomials": self.excluded_monomials, "steps": self.steps}
        if self.n is not None:
            out["n"] = self.n
        out.update(self.extra)
        return out


class _Tracker:
    """Running state with ``unit * (F0 o change) == F`` at every step."""

    def __init__(self, F: MultiPoly, order: int):
        self.N = order
        self.vars = F.vars
        self.F = F.truncate(order)
        self.unit = MultiPoly.const(1, self.vars)
        self.change = CoordinateChange.identity(self.vars)
        self.steps: list[str] = []

    def var(self, v: str) -> MultiPoly:
        return MultiPoly.var(v, self.vars)

    def subst(self, images: dict, label: str) -> None:
        step = CoordinateChange(images, self.vars)
        if step.is_identity():
            return
        self.F = step.apply(self.F, self.N)
        self.unit = step.apply(self.unit, self.N)
        self.change = self.change.then(step, self.N)
        self.steps.append(label + ": " + ", ".join(f"{v} -> {p}" for v, p in step.images.items()))

    def multiply(self, u: MultiPoly, label: str) -> None:
        if u == MultiPoly.const(1, self.vars):
            return
        self.F = self.F.mul(u, self.N)
        self.unit = self.unit.mul(u, self.N)
        self.steps.append(label)

    def prepare(self, pivot: str) -> tuple[MultiPoly, MultiPoly]:
        """Make F monic quadratic in ``pivot``; returns (A, B) with F = p^2 + A p + B."""
        U, A, B = weierstrass_prepare(self.F, pivot, self.N)
        if U != MultiPoly.const(1, self.vars):
            self.multiply(unit_inverse(U, self.N), f"Weierstrass preparation in {pivot}")
        p = self.var(pivot)
        self.F = (p.pow(2) + A.mul(p, self.N) + B).truncate(self.N)
        return A, B

    def result(self, tag, excluded, curve, n=None, extra=None) -> NormalFormResult:
        return NormalFormResult(tag, Jet(self.F, self.N), self.change, self.unit.truncate(self.N),
                                excluded, curve, n, list(self.steps), extra or {})


# shape checks ---------------------------------------------------------------

def _curve_coordinates(germ: Germ3Fold) -> tuple[str, ...]:
    names = []
    for g in germ.I.gens:
        if len(g.terms) != 1 or g.degree() != 1:
            raise NotInShape("curve generators must be coordinate functions here")
        (m, _), = g.terms.items()
        names.append(germ.vars[m.index(1)])
    return tuple(sorted(names, key=germ.vars.index))


def _section(F: MultiPoly) -> MultiPoly:
    return F.subs_const({"t": 0})


def _p(text: str, vars) -> MultiPoly:
    from .poly import parse_poly
    return parse_poly(text, vars)


def _read_shape(S: MultiPoly, kind: str) -> tuple[int, Fraction]:
    """Match the t = 0 section against x^2 + y^2 z + c*(tail); return (n, c)."""
    V = S.vars
    base = _p("x^2+y^2*z", V)
    rest = S - base
    if len(rest.terms) != 1:
        raise NotInShape(f"t = 0 section is not x^2 + y^2*z + c*monomial: {S}")
    (m, c), = rest.terms.items()
    e = dict(zip(V, m))
    if kind == "FD_l" and _e(e, z=e["z"]) and e["z"] >= 3:
        return e["z"] + 1, c
    if kind == "FD_r_even" and _e(e, y=1, z=e["z"]) and e["z"] >= 2:
        return 2 * e["z"], c
    if kind == "FD_r_odd" and _e(e, x=1, z=e["z"]) and e["z"] >= 2:
        return 2 * e["z"] + 1, c
    raise NotInShape(f"t = 0 section {S} does not have the {kind} shape")


def _tail(F: MultiPoly) -> MultiPoly:
    """phi with F = F(t=0) + t*phi."""
    return (F - _section(F)).divide_by_var_power("t", 1)


def _check_no_linear_tail(F: MultiPoly) -> None:
    lin = _tail(F).homogeneous_part(1)
    if lin:
        raise WrongStratum(f"tail has linear terms ({lin}): the ambient point is cA and the general section is A_m")


def _remove_x_linear(tr: _Tracker, keep: MultiPoly | None = None) -> None:
    """Weierstrass in x, then shift so the x-coefficient becomes ``keep``."""
    x = tr.var("x")
    A, _ = tr.prepare("x")
    target = keep if keep is not None else MultiPoly.zero(tr.vars)
    shift = (A - target).scale(Fraction(1, 2))
    if shift.subs_const({"t": 0}):
        raise NotInShape("x-linear part of the t = 0 section is not as expected")
    tr.subst({"x": x - shift}, "shift x")


def _pure_tail(F: MultiPoly, var: str) -> MultiPoly:
    """Terms t * var^k of F (t-degree 1, no other variable)."""
    V = F.vars
    it, iv = V.index("t"), V.index(var)
    return MultiPoly({m: c for m, c in F.terms.items()
                      if m[it] == 1 and m[iv] >= 1 and sum(m) == 1 + m[iv]}, V)


def _already(tr: _Tracker, excluded: list[MonomialFamily]) -> bool:
    """Input already satisfies the postconditions: keep the identity certificate."""
    _check_no_linear_tail(tr.F)
    return not any(f.hits(tr.F) for f in excluded)


def _require_order(n: int, N: int) -> None:
    if N < n + 1:
        raise JetOrderInsufficient(f"jet order {N} is below {n + 1}, needed for D{n}")


# D_n forms ------------------------------------------------------------------

def _normalize_fdl(germ: Germ3Fold, n5plus: bool) -> NormalFormResult:
    if _curve_coordinates(germ) != ("x", "z", "t"):
        raise NotInShape("FD_l needs the curve ideal (x, z, t)")
    tr = _Tracker(germ.F, germ.order)
    n, c = _read_shape(_section(tr.F), "FD_l")
    _require_order(n, tr.N)
    if n5plus and n < 5:
        raise WrongStratum("the cubic-tail form needs n >= 5")
    excluded = [FAMILIES["x outside x^2"], FAMILIES["t*y^k"]] + ([FAMILIES["t*(quadratic)"]] if n5plus else [])
    tag = "D_FDl_n5plus" if n5plus else "D_FDl"
    if _already(tr, excluded):
        return tr.result(tag, excluded, ("x", "z", "t"), n, {"z_coefficient": str(c)})
    _remove_x_linear(tr)
    _check_no_linear_tail(tr.F)
    y, z, t = tr.var("y"), tr.var("z"), tr.var("t")

    def absorb_y_powers():
        for _ in range(tr.N):
            f = _pure_tail(tr.F, "y")
            if not f:
                return
            g = f.divide_by_var_power("y", 2).divide_by_var_power("t", 1)
            tr.subst({"z": z - t * g}, "absorb t*y^k into z")
        raise NormalFormError("y-power removal did not stabilise")

    absorb_y_powers()
    if n5plus:
        phi2 = _tail(tr.F).homogeneous_part(2)
        if phi2:
            a = phi2.coeff((0, 1, 1, 0))
            if phi2 != (y * z).scale(a) + (z * t).scale(a * a / 4) or a == 0:
                raise WrongStratum(f"quadratic tail {phi2} is not removable: a D4 section through the curve exists")
            tr.subst({"y": y - t.scale(a / 2)}, "complete y^2 z + a y z t + a^2 z t^2/4")
            absorb_y_powers()
    return tr.result(tag, excluded, ("x", "z", "t"), n, {"z_coefficient": str(c)})


def _normalize_fdr_even(germ: Germ3Fold) -> NormalFormResult:
    if _curve_coordinates(germ) != ("x", "y", "t"):
        raise NotInShape("FD_r needs the curve ideal (x, y, t)")
    tr = _Tracker(germ.F, germ.order)
    n, c = _read_shape(_section(tr.F), "FD_r_even")
    m = n // 2
    _require_order(n, tr.N)
    excluded = [FAMILIES["x outside x^2"], FAMILIES["t*z^k"]]
    extra = {"m": m, "yz_coefficient": str(c)}
    if _already(tr, excluded):
        return tr.result("D_FDr_even", excluded, ("x", "y", "t"), n, extra)
    _remove_x_linear(tr)
    _check_no_linear_tail(tr.F)
    y, z, t = tr.var("y"), tr.var("z"), tr.var("t")
    for _ in range(tr.N):
        f = _pure_tail(tr.F, "z")
        if not f:
            break
        k = f.var_adic_order("z")
        if k < m:
            raise WrongStratum(f"t*z^{k} with {k} < {m}: the general section is a smaller D type")
        g = f.divide_by_var_power("z", m).divide_by_var_power("t", 1).scale(1 / c)
        tr.subst({"y": y - t * g}, "absorb t*z^k into y")
    else:
        raise NormalFormError("z-power removal did not stabilise")
    return tr.result("D_FDr_even", excluded, ("x", "y", "t"), n, extra)


def _normalize_fdr_odd(germ: Germ3Fold, variant: str) -> NormalFormResult:
    if _curve_coordinates(germ) != ("x", "y", "t"):
        raise NotInShape("FD_r needs the curve ideal (x, y, t)")
    tr = _Tracker(germ.F, germ.order)
    n, c = _read_shape(_section(tr.F), "FD_r_odd")
    m = (n - 1) // 2
    _require_order(n, tr.N)
    x, y, z, t = (tr.var(v) for v in ("x", "y", "z", "t"))
    tag = "D_FDr_odd_" + variant
    excluded = [_odd_x_family(m, variant), FAMILIES["t*y*z"], FAMILIES["t*z^k"]]
    if variant == "b":
        excluded.append(FAMILIES["t*y^2"])
    single = len([mm for mm in tr.F.terms if mm[0] == 1 and mm[3] == 1 and mm[1] == 0]) <= 1
    if _already(tr, excluded) and (variant == "b" or single):
        return tr.result(tag, excluded, ("x", "y", "t"), n, {"m": m, "xz_coefficient": str(c)})
    _remove_x_linear(tr, keep=z.pow(m).scale(c))
    _check_no_linear_tail(tr.F)
    b = tr.F.coeff((0, 1, 1, 1))
    if b:
        tr.subst({"y": y - t.scale(b / 2)}, "remove t*y*z")
    for _ in range(tr.N):
        f = _pure_tail(tr.F, "z")
        if not f:
            break
        k = f.var_adic_order("z")
        if k <= m:
            raise WrongStratum(f"t*z^{k} with {k} <= {m}: not a general D{n} section in FD_r position")
        w = (t * f.divide_by_var_power("z", m).divide_by_var_power("t", 1)).scale(1 / c)
        tr.subst({"x": x - w}, "absorb t*z^k into x")
    else:
        raise NormalFormError("z-power removal did not stabilise")
    # x*t*g(z) -> a*x*t*z^nu by t -> t / unit(z)
    it = tr.vars.index
    g = MultiPoly({(0, 0, mm[2], 0): cc for mm, cc in tr.F.terms.items()
                   if mm[it("x")] == 1 and mm[it("t")] == 1 and mm[it("y")] == 0}, tr.vars)
    a, nu = Fraction(0), None
    if g:
        nu = g.var_adic_order("z")
        w = g.divide_by_var_power("z", nu)
        a = w.constant_term()
        w = w.scale(1 / a)
        if w != MultiPoly.const(1, tr.vars):
            tr.subst({"t": t * unit_inverse(w, tr.N)}, "rescale t by a unit in z")
    extra = {"m": m, "xz_coefficient": str(c), "a": str(a), "nu": nu}
    if variant == "b":
        c2 = tr.F.coeff((0, 2, 0, 1))
        if c2:
            tr.subst({"z": z - t.scale(c2)}, "remove t*y^2")
    return tr.result(tag, excluded, ("x", "y", "t"), n, extra)


def normalize(germ: Germ3Fold, target: str | None = None) -> NormalFormResult:
    """Normal form for a curve on a D_n section t = 0.

    Parameters
    ----------
    germ : Germ3Fold
        The curve ideal must be (x, z, t) for FD_l and (x, y, t) for FD_r, and
        the t = 0 section must read x^2 + y^2 z + c z^(n-1),
        x^2 + y^2 z + c y z^m (n = 2m) or x^2 + y^2 z + c x z^m (n = 2m + 1).
    target : str, optional
        One of ``D_FDl``, ``D_FDl_n5plus``, ``D_FDr_even``, ``D_FDr_odd_a``,
        ``D_FDr_odd_b``.  Inferred from the curve ideal and section if omitted
        (FD_l with n >= 5 gives ``D_FDl_n5plus``; odd FD_r gives variant a).

    Returns
    -------
    NormalFormResult
        Normal form with change, unit and the excluded monomial families.

    Raises
    ------
    NotInShape, WrongStratum, JetOrderInsufficient
    """
    if target is None:
        target = infer_target(germ)
    if target == "D_FDl":
        return _normalize_fdl(germ, False)
    if target == "D_FDl_n5plus":
        return _normalize_fdl(germ, True)
    if target == "D_FDr_even":
        return _normalize_fdr_even(germ)
    if target in ("D_FDr_odd_a", "D_FDr_odd_b"):
        return _normalize_fdr_odd(germ, target[-1])
    if target == "A3_middle":
        return normalize_A3_middle(germ)
    raise ValueError(f"unknown normal form {target!r}")


def infer_target(germ: Germ3Fold) -> str:
    curve = _curve_coordinates(germ)
    S = _section(germ.F.truncate(germ.order))
    if curve == ("x", "z", "t"):
        n, _ = _read_shape(S, "FD_l")
        return "D_FDl_n5plus" if n >= 5 else "D_FDl"
    if curve == ("x", "y", "t"):
        for kind, tag in (("FD_r_even", "D_FDr_even"), ("FD_r_odd", "D_FDr_odd_a")):
            try:
                _read_shape(S, kind)
                return tag
            except NotInShape:
                pass
    raise NotInShape("cannot infer a D_n normal form for this germ")


# A_3 middle -------------------------------------------------------------------

def _quad_coeffs(S: MultiPoly) -> tuple[Fraction, Fraction, Fraction]:
    V = S.vars
    e = lambda **k: tuple(k.get(v, 0) for v in V)
    return S.coeff(e(x=2)), S.coeff(e(x=1, y=1)), S.coeff(e(y=2))


def normalize_A3_middle(germ: Germ3Fold) -> NormalFormResult:
    """Normal form x^2 + delta*y^2 + kappa*x*z^2 + t*phi(x, z, t), curve (x, y, t).

    The section t = 0 must be A_3 with the curve through the middle
    exceptional curve.  Over the rationals the constants delta and kappa are
    kept (both nonzero); over C they scale to 1 and 2.  The tail has no
    power t*z^k.  ``f_le3`` is the part of degree <= 3 of
    F_normal - x^2 - delta*y^2.
    """
    V = germ.vars
    if V != ("x", "y", "z", "t"):
        raise NotInShape("expected variables x, y, z, t")
    N = germ.order
    fr = germ.frame
    if set(fr.targets) != {"x", "y", "t"}:
        raise NotInShape("the curve must be cut out by functions with independent linear parts in x, y, t")
    t_img = fr.change.image("t")
    if t_img != MultiPoly.var("t", V):
        raise NotInShape("the section t = 0 must contain the curve")
    tr = _Tracker(germ.F, N)
    tr.subst(dict(fr.change.images), "straighten the curve to (x, y, t)")
    S0 = _section(tr.F).truncate(N)
    S3 = MultiPoly({m[:3]: c for m, c in S0.terms.items()}, ("x", "y", "z"))
    typ = classify_duval(S3, N)
    if typ != DuValType("A", 3):
        raise WrongStratum(f"t = 0 section is {typ.label}, not A3")
    sb = surface_blowup(S3, [_p("x", S3.vars), _p("y", S3.vars)], N)
    if sb.d != 2:
        raise WrongStratum(f"curve meets an edge of the A3 graph (d = {sb.d}), not the middle")
    x, y, z, t = (tr.var(v) for v in V)
    excluded = [FAMILIES["y in tail"], FAMILIES["t*z^k"]]
    if tr.F.coeff((2, 0, 0, 0)) == 1:
        delta, kappa = tr.F.coeff((0, 2, 0, 0)), tr.F.coeff((1, 0, 2, 0))
        form = x.pow(2) + y.pow(2).scale(delta) + (x * z.pow(2)).scale(kappa)
        if delta and kappa and S0 == form and not any(f.hits(tr.F) for f in excluded) \
                and not _tail(tr.F).coeff((0, 0, 1, 0)):
            return _a3_result(tr, delta, kappa, excluded)
    # quadratic form in (x, y) and the coefficient of z^2 linear in (x, y)
    q11, q12, q22 = _quad_coeffs(S0)
    p2 = S0.coeff((1, 0, 2, 0))
    r2 = S0.coeff((0, 1, 2, 0))
    if (p2, r2) == (0, 0):
        raise WrongStratum("no x*z^2 or y*z^2 term: not an A3 middle position")
    vY = (-r2 / p2, Fraction(1)) if p2 else (Fraction(1), Fraction(0))
    qY = q11 * vY[0] ** 2 + q12 * vY[0] * vY[1] + q22 * vY[1] ** 2
    if qY == 0:
        raise WrongStratum("isotropic kernel direction: not an A3 middle position")
    # v_X orthogonal to v_Y for the bilinear form of q
    bx = 2 * q11 * vY[0] + q12 * vY[1]
    by = q12 * vY[0] + 2 * q22 * vY[1]
    vX = (-by, bx) if (by, bx) != (0, 0) else (Fraction(1), Fraction(0))
    lead = next(v for v in vX if v != 0)
    vX = (vX[0] / lead, vX[1] / lead)
    tr.subst({"x": x.scale(vX[0]) + y.scale(vY[0]), "y": x.scale(vX[1]) + y.scale(vY[1])},
             "diagonalise the quadratic part")
    alpha = tr.F.coeff((2, 0, 0, 0))
    tr.multiply(MultiPoly.const(1 / alpha, V), "normalise the x^2 coefficient")
    # kill the part linear in y along the curve: x -> x - c(z) y
    S0 = _section(tr.F)
    pz = S0.split_by("x").get(1, MultiPoly.zero(V)).subs_const({"y": 0})
    rz = S0.split_by("y").get(1, MultiPoly.zero(V)).subs_const({"x": 0})
    if rz:
        k = pz.var_adic_order("z")
        lead = pz.divide_by_var_power("z", k)
        cz = (rz.divide_by_var_power("z", k)).mul(unit_inverse(lead, N), N)
        tr.subst({"x": x - cz.mul(y, N)}, "remove y-linear terms along the curve")
    # y: Weierstrass on the section, then on the whole series
    A, _ = tr.prepare("y")
    tr.subst({"y": y - A.scale(Fraction(1, 2))}, "complete the square in y")
    # section now y^2 + B(x, z); factor B = U2 * x * (x + A2(z))
    S0 = _section(tr.F)
    B = S0 - y.pow(2)
    U2, A2, B2 = weierstrass_prepare(B, "x", N)
    if B2.truncate(N):
        raise WrongStratum("section does not contain the curve")
    kz = A2.var_adic_order("z")
    if kz != 2:
        raise WrongStratum(f"x-coefficient along the curve has order {kz}, expected 2")
    kappa_unit = A2.divide_by_var_power("z", 2)
    kappa = kappa_unit.constant_term()
    u = kappa_unit.scale(1 / kappa)
    # z -> z * u^(-1/2) makes A2 = kappa z^2; y -> y * sqrt(U2/U2(0)) balances the unit
    if u != MultiPoly.const(1, V):
        tr.subst({"z": z.mul(unit_power(u, Fraction(-1, 2), N), N)}, "rescale z")
        S0 = _section(tr.F)
        B = S0 - y.pow(2)
        U2, A2, B2 = weierstrass_prepare(B, "x", N)
    u0 = U2.constant_term()
    if U2 != MultiPoly.const(u0, V):
        tr.subst({"y": y.mul(unit_power(U2.scale(1 / u0), Fraction(1, 2), N), N)}, "absorb the section unit into y")
    tr.multiply(unit_inverse(U2, N), "divide by the section unit")
    # remove y from the tail: Weierstrass in y again (exact at t = 0)
    A, _ = tr.prepare("y")
    tr.subst({"y": y - A.scale(Fraction(1, 2))}, "complete the square in y")
    delta_inv = tr.F.coeff((2, 0, 0, 0))
    tr.multiply(MultiPoly.const(1 / delta_inv, V), "normalise the x^2 coefficient")
    delta = tr.F.coeff((0, 2, 0, 0))
    kappa = tr.F.coeff((1, 0, 2, 0))
    expected = x.pow(2) + y.pow(2).scale(delta) + (x * z.pow(2)).scale(kappa)
    if _section(tr.F) != expected.truncate(N):
        raise NormalFormError(f"section did not reach the expected form: {_section(tr.F)}")
    phi = _tail(tr.F)
    if phi.homogeneous_part(1).coeff((0, 0, 1, 0)):
        raise WrongStratum("t*z term in the tail: the general section through the curve is A1")
    for _ in range(N):
        f = _pure_tail(tr.F, "z")
        if not f:
            break
        w = (t * f.divide_by_var_power("z", 2).divide_by_var_power("t", 1)).scale(1 / kappa)
        tr.subst({"x": x - w}, "absorb t*z^k into x")
    else:
        raise NormalFormError("z-power removal did not stabilise")
    return _a3_result(tr, delta, kappa, excluded)


def _a3_result(tr: _Tracker, delta, kappa, excluded) -> NormalFormResult:
    rest = tr.F - tr.var("x").pow(2) - tr.var("y").pow(2).scale(delta)
    low = rest.part_up_to(3)
    extra = {"delta": str(delta), "kappa": str(kappa), "f_le3": str(low)}
    res = tr.result("A3_middle", excluded, ("x", "y", "t"), 3, extra)
    res.f_le3 = low
    return res




# square test / cA detection -------------------------------------------------------

def square_test_q2(q: MultiPoly, vars: Sequence[str] = ("x", "y", "z")) -> bool:
    """True iff the quadratic part of q is a constant multiple of a square."""
    return factors.square_test_q2(q, vars)


def is_general_section_A(germ: Germ3Fold) -> bool:
    """True iff a general hyperplane x = b y + c z through the curve cuts an A_m.

    The curve must be (x, y, z).  The quadratic part of the section is
    psi_2(y, z, t) = Q(b y + c z, y, z, t); the answer is whether psi_2 has
    rank >= 2 for generic (b, c).  The 2x2 minors of its Gram matrix have
    degree at most 4 in each of b, c, so vanishing on a 5x5 grid decides.
    """
    if _curve_coordinates(germ) != ("x", "y", "z"):
        raise NotInShape("the curve must be normalised to (x, y, z)")
    V = germ.vars
    Q = germ.F.truncate(germ.order).homogeneous_part(2)
    y, z = MultiPoly.var("y", V), MultiPoly.var("z", V)
    for b in range(5):
        for c in range(5):
            psi = compose(Q, {"x": y.scale(b) + z.scale(c)}, None)
            if not factors.square_test_q2(psi, ("y", "z", "t")):
                return True
    return False
