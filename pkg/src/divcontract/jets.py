"""Jets, analytic coordinate changes and Weierstrass-type reductions.

Power series are handled as polynomials truncated at a jet order ``N``.
Every routine here takes the order explicitly and is exact on all terms of
total degree at most ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from . import linalg
from .poly import MultiPoly

DEFAULT_ORDER = 12


class NotACoordinateChange(ValueError):
    pass


class NotPrepared(ValueError):
    """Raised when a Weierstrass reduction is asked of an unprepared series."""


@dataclass(frozen=True)
class Jet:
    """A power series known up to total degree ``order``."""

    poly: MultiPoly
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("jet order must be >= 1")
        object.__setattr__(self, "poly", self.poly.truncate(self.order))

    @property
    def vars(self):
        return self.poly.vars

    def _other(self, other):
        if isinstance(other, Jet):
            return other.poly, min(self.order, other.order)
        if isinstance(other, MultiPoly):
            return other, self.order
        return MultiPoly.const(other, self.vars), self.order

    def __add__(self, other):
        p, n = self._other(other)
        return Jet(self.poly + p, n)

    __radd__ = __add__

    def __sub__(self, other):
        p, n = self._other(other)
        return Jet(self.poly - p, n)

    def __neg__(self):
        return Jet(-self.poly, self.order)

    def __mul__(self, other):
        p, n = self._other(other)
        return Jet(self.poly.mul(p, n), n)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Jet):
            n = min(self.order, other.order)
            return self.poly.truncate(n) == other.poly.truncate(n)
        return NotImplemented

    def __hash__(self):
        return hash((self.poly, self.order))

    def __str__(self):
        return f"{self.poly} + O({self.order + 1})"


def unit_inverse(u: MultiPoly, order: int) -> MultiPoly:
    """1/u for a unit u (nonzero constant term), by geometric series."""
    c = u.constant_term()
    if c == 0:
        raise ArithmeticError("not a unit: constant term vanishes")
    w = (u.scale(1 / c) - 1).truncate(order)
    result = MultiPoly.const(1, u.vars)
    term = MultiPoly.const(1, u.vars)
    for _ in range(order):
        term = (-term).mul(w, order)
        if not term:
            break
        result = result + term
    return result.scale(1 / c)


def unit_power(u: MultiPoly, alpha: Fraction, order: int) -> MultiPoly:
    """u**alpha for a unit with constant term 1, via the binomial series."""
    alpha = Fraction(alpha)
    if u.constant_term() != 1:
        raise ArithmeticError("unit_power needs constant term 1")
    w = (u - 1).truncate(order)
    result = MultiPoly.const(1, u.vars)
    term = MultiPoly.const(1, u.vars)
    coef = Fraction(1)
    for k in range(1, order + 1):
        term = term.mul(w, order)
        if not term:
            break
        coef = coef * (alpha - k + 1) / k
        result = result + term.scale(coef)
    return result


def compose(p: MultiPoly, images: Mapping[str, MultiPoly], order: int | None) -> MultiPoly:
    """Substitute ``images[v]`` for each listed variable v (simultaneously).

    Variables absent from ``images`` are left alone; terms are grouped by the
    exponents of the substituted variables so the cost scales with the number
    of distinct such exponent patterns.
    """
    vars = p.vars
    moved = [i for i, v in enumerate(vars) if v in images]
    if not moved:
        return p.truncate(order) if order is not None else p
    groups: dict[tuple, dict] = {}
    for m, c in p.terms.items():
        key = tuple(m[i] for i in moved)
        rest = list(m)
        for i in moved:
            rest[i] = 0
        groups.setdefault(key, {})[tuple(rest)] = c
    power_cache: dict[tuple[int, int], MultiPoly] = {}

    def power(i: int, k: int) -> MultiPoly:
        if k == 0:
            return MultiPoly.const(1, vars)
        key = (i, k)
        if key not in power_cache:
            base = images[vars[i]]
            power_cache[key] = base if k == 1 else power(i, k - 1).mul(base, order)
        return power_cache[key]

    out = MultiPoly.zero(vars)
    for key, rest_terms in groups.items():
        rest = MultiPoly(rest_terms, vars)
        prod = rest
        for i, k in zip(moved, key):
            if k:
                prod = prod.mul(power(i, k), order)
            if not prod:
                break
        out = out + prod
    return out.truncate(order) if order is not None else out


class CoordinateChange:
    """A holomorphic change of coordinates fixing the origin.

    ``images`` maps a variable name to the series substituted for it; names
    not listed are fixed.  Applying the change to f yields ``f o phi``.
    """

    def __init__(self, images: Mapping[str, MultiPoly] | Sequence[tuple[str, MultiPoly]],
                 vars: Sequence[str], check: bool = True):
        self.vars = tuple(vars)
        items = images.items() if isinstance(images, Mapping) else images
        self.images: dict[str, MultiPoly] = {}
        for v, img in items:
            if v not in self.vars:
                raise NotACoordinateChange(f"unknown variable {v}")
            if not isinstance(img, MultiPoly):
                raise TypeError("images must be MultiPoly")
            if img.vars != self.vars:
                img = img.embed(self.vars)
            if img == MultiPoly.var(v, self.vars):
                continue
            self.images[v] = img
        if check:
            self.validate()

    @classmethod
    def identity(cls, vars: Sequence[str]) -> "CoordinateChange":
        return cls({}, vars)

    def is_identity(self) -> bool:
        return not self.images

    def image(self, v: str) -> MultiPoly:
        return self.images.get(v, MultiPoly.var(v, self.vars))

    def linear_matrix(self) -> list[list[Fraction]]:
        """Row i holds the linear part of the image of variable i."""
        n = len(self.vars)
        rows = []
        for v in self.vars:
            img = self.image(v)
            row = []
            for j in range(n):
                e = [0] * n
                e[j] = 1
                row.append(img.coeff(e))
            rows.append(row)
        return rows

    def validate(self) -> None:
        for v, img in self.images.items():
            if img.constant_term() != 0:
                raise NotACoordinateChange(f"image of {v} does not fix the origin")
        if linalg.bareiss_det(self.linear_matrix()) == 0:
            raise NotACoordinateChange("linear part is not invertible")

    def apply(self, p: MultiPoly, order: int | None) -> MultiPoly:
        if p.vars != self.vars:
            p = p.embed(self.vars)
        return compose(p, self.images, order)

    def then(self, other: "CoordinateChange", order: int | None) -> "CoordinateChange":
        """The change equivalent to applying ``self`` first and ``other`` second."""
        imgs = {v: other.apply(self.image(v), order) for v in self.vars}
        for v, img in other.images.items():
            if v not in self.images:
                imgs[v] = img.truncate(order) if order is not None else img
        return CoordinateChange(imgs, self.vars, check=False)

    def inverse(self, order: int) -> "CoordinateChange":
        lin = self.linear_matrix()
        lin_inv = linalg.inverse(lin)
        n = len(self.vars)
        gens = [MultiPoly.var(v, self.vars) for v in self.vars]
        nonlinear = [(self.image(v) - _linear_combo(lin[i], gens)) for i, v in enumerate(self.vars)]
        psi = [_linear_combo(lin_inv[i], gens) for i in range(n)]
        if all(not h for h in nonlinear):
            return CoordinateChange(dict(zip(self.vars, psi)), self.vars, check=False)
        for _ in range(order):
            sub = dict(zip(self.vars, psi))
            rhs = [gens[i] - compose(nonlinear[i], sub, order) for i in range(n)]
            new = [_linear_combo(lin_inv[i], rhs).truncate(order) for i in range(n)]
            if new == psi:
                break
            psi = new
        return CoordinateChange(dict(zip(self.vars, psi)), self.vars, check=False)

    def to_json(self) -> dict:
        return {"vars": list(self.vars),
                "images": {v: str(self.images[v]) for v in self.vars if v in self.images}}

    def __repr__(self):
        body = ", ".join(f"{v} -> {img}" for v, img in self.images.items())
        return f"CoordinateChange({body or 'identity'})"


def _linear_combo(coeffs: Sequence[Fraction], polys: Sequence[MultiPoly]) -> MultiPoly:
    out = MultiPoly.zero(polys[0].vars)
    for c, p in zip(coeffs, polys):
        if c:
            out = out + p.scale(c)
    return out


def apply_change(p: MultiPoly | Jet, c: CoordinateChange, order: int = DEFAULT_ORDER) -> Jet:
    """Substitute a coordinate change into p and truncate at ``order``."""
    if isinstance(p, Jet):
        order = min(order, p.order)
        p = p.poly
    c.validate()
    return Jet(c.apply(p, order), order)


def linear_part_independent(gens: Sequence[MultiPoly]) -> bool:
    rows = [[g.coeff(_unit_exp(len(g.vars), j)) for j in range(len(g.vars))] for g in gens]
    return linalg.rank(rows) == len(gens)


def _unit_exp(n: int, j: int) -> tuple:
    e = [0] * n
    e[j] = 1
    return tuple(e)


def straighten(gens: Sequence[MultiPoly], targets: Sequence[str], order: int) -> CoordinateChange:
    """Coordinates in which the smooth germ V(gens) becomes V(targets).

    Returns the change ``c`` with ``gens[i] o c == targets[i]`` up to jet order,
    so ``c.apply(F)`` expresses F in coordinates where the curve is linear.
    """
    vars = gens[0].vars
    n = len(vars)
    if not linear_part_independent(gens):
        raise NotACoordinateChange("generators do not have independent linear parts")
    rows = [[g.coeff(_unit_exp(n, j)) for j in range(n)] for g in gens]
    comp_targets = [v for v in vars if v not in targets]
    comp_funcs = []
    chosen = list(rows)
    for j in range(n):
        if len(comp_funcs) == len(comp_targets):
            break
        cand = [1 if k == j else 0 for k in range(n)]
        if linalg.rank(chosen + [cand]) > len(chosen):
            chosen.append(cand)
            comp_funcs.append(MultiPoly.var(vars[j], vars))
    images = dict(zip(targets, gens))
    images.update(zip(comp_targets, comp_funcs))
    forward = CoordinateChange(images, vars)
    return forward.inverse(order)


def split_u_linear(F: MultiPoly, u: str, order: int) -> tuple[MultiPoly, CoordinateChange]:
    """Remove every term linear in ``u`` by shifts ``u -> u - B/(2a)``.

    Needs the coefficient ``a`` of ``u^2`` to be a nonzero constant.  The
    returned series has no term of u-degree exactly one.
    """
    vars = F.vars
    i = vars.index(u)
    e2 = [0] * len(vars)
    e2[i] = 2
    a = F.coeff(e2)
    if a == 0:
        raise NotPrepared(f"{u}^2 coefficient is not a unit")
    change = CoordinateChange.identity(vars)
    G = F.truncate(order)
    uvar = MultiPoly.var(u, vars)
    for _ in range(4 * order + 4):
        B = G.split_by(u).get(1)
        if not B:
            return G, change
        step = CoordinateChange({u: uvar - B.scale(Fraction(1, 2) / a)}, vars)
        G = step.apply(G, order)
        change = change.then(step, order)
    raise ArithmeticError("splitting did not stabilise")


def weierstrass_prepare(F: MultiPoly, pivot: str, order: int) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """Write F = U * (pivot^2 + A*pivot + B) up to ``order``.

    Returns ``(U, A, B)`` with U a unit and A, B free of the pivot.  F must
    have a nonzero constant coefficient on ``pivot^2`` and total order 2.
    """
    vars = F.vars
    i = vars.index(pivot)
    e2 = [0] * len(vars)
    e2[i] = 2
    if F.coeff(e2) == 0:
        raise NotPrepared(f"{pivot}^2 coefficient is not a unit")
    if F.constant_term() != 0:
        raise NotPrepared("series does not vanish at the origin")
    U = MultiPoly.const(1, vars)
    P = F.truncate(order)
    sq = list(e2)
    for _ in range(4 * order + 4):
        parts = P.split_by(pivot)
        A = parts.get(1, MultiPoly.zero(vars))
        B = parts.get(0, MultiPoly.zero(vars))
        high = MultiPoly.zero(vars)
        for k, c in parts.items():
            if k >= 2:
                high = high + c.mul_monomial([k - 2 if j == i else 0 for j in range(len(vars))])
        Q = high.truncate(order - 2) if order >= 2 else high
        if Q == MultiPoly.const(1, vars):
            return U.truncate(order), A, B
        U = U.mul(Q, order)
        Qinv = unit_inverse(Q, order)
        rest = (P - high.mul_monomial(sq)).mul(Qinv, order)
        P = MultiPoly.var(pivot, vars).pow(2) + rest
    raise ArithmeticError("Weierstrass preparation did not stabilise")


def weierstrass_reduction(F: MultiPoly | Jet, pivot: str, order: int = DEFAULT_ORDER):
    """Reduce F to ``pivot^2 + G(other variables)`` and report the unit.

    Returns ``(G_jet, change, unit)`` with ``unit * (F o change) == G`` at
    jet order ``order``.
    """
    if isinstance(F, Jet):
        order = min(order, F.order)
        F = F.poly
    U, A, B = weierstrass_prepare(F, pivot, order)
    vars = F.vars
    piv = MultiPoly.var(pivot, vars)
    change = CoordinateChange({pivot: piv - A.scale(Fraction(1, 2))}, vars)
    G = piv.pow(2) + B - A.mul(A, order).scale(Fraction(1, 4))
    unit = unit_inverse(change.apply(U, order), order)
    return Jet(G, order), change, unit


def weierstrass_square_reduce(F: MultiPoly | Jet, pivot: str, order: int = DEFAULT_ORDER):
    """Reduce F to ``pivot^2 + B`` with B free of the pivot.

    Returns ``(G, change)``; see :func:`weierstrass_reduction` for the unit.
    """
    G, change, _ = weierstrass_reduction(F, pivot, order)
    return G, change


def binomial_series_coeffs(alpha: Fraction, n: int) -> list[Fraction]:
    out = [Fraction(1)]
    c = Fraction(1)
    for k in range(1, n + 1):
        c = c * (alpha - k + 1) / k
        out.append(c)
    return out


def monomial_count(nvars: int, order: int) -> int:
    return comb(nvars + order, order)
