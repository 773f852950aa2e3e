"""Polynomial ideals: Groebner bases, solvability, saturation, symbolic powers.

Groebner bases are computed by sympy's Buchberger implementation.  Size and
degree caps are checked on the result; an over-budget basis raises
:class:`BudgetExceeded` rather than being used.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

import sympy
from sympy.polys.orderings import ProductOrder, grevlex, lex

from .poly import MultiPoly


class BudgetExceeded(RuntimeError):
    """A Groebner computation went past its size, degree or time cap."""


@dataclass(frozen=True)
class GroebnerBudget:
    max_basis: int = 2000
    max_degree: int = 80
    max_seconds: float = 300.0


DEFAULT_BUDGET = GroebnerBudget()


@dataclass
class BudgetMeter:
    """Accumulates resources spent by Groebner calls (for reporting)."""

    calls: int = 0
    seconds: float = 0.0
    largest_basis: int = 0
    budget: GroebnerBudget = field(default_factory=GroebnerBudget)

    def record(self, size: int, elapsed: float) -> None:
        self.calls += 1
        self.seconds += elapsed
        self.largest_basis = max(self.largest_basis, size)

    def to_json(self) -> dict:
        return {"groebner_calls": self.calls, "largest_basis": self.largest_basis}


class PolyIdeal:
    """An ideal given by generators in a fixed ambient variable list."""

    __slots__ = ("gens", "vars")

    def __init__(self, gens: Iterable[MultiPoly], vars: Sequence[str] | None = None):
        gens = list(gens)
        if vars is None:
            if not gens:
                raise ValueError("an ideal needs at least one generator")
            vars = gens[0].vars
        self.vars = tuple(vars)
        seen = []
        for g in gens:
            if g.vars != self.vars:
                g = g.embed(self.vars)
            if g and g not in seen:
                seen.append(g)
        if not seen:
            seen = [MultiPoly.zero(self.vars)]
        self.gens: tuple[MultiPoly, ...] = tuple(seen)

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __add__(self, other: "PolyIdeal | Iterable[MultiPoly]") -> "PolyIdeal":
        more = other.gens if isinstance(other, PolyIdeal) else tuple(other)
        return PolyIdeal(self.gens + tuple(more), self.vars)

    def is_zero(self) -> bool:
        return all(not g for g in self.gens)

    def to_json(self) -> dict:
        return {"vars": list(self.vars), "generators": [str(g) for g in self.gens]}

    def __repr__(self):
        return f"PolyIdeal([{', '.join(map(str, self.gens))}])"


# conversion ---------------------------------------------------------------

def _symbols(vars: Sequence[str]):
    return sympy.symbols(list(vars))


def _to_sympy_poly(p: MultiPoly, syms) -> sympy.Poly:
    data = {m: sympy.Rational(c.numerator, c.denominator) for m, c in p.terms.items()}
    if not data:
        return sympy.Poly(0, *syms, domain=sympy.QQ)
    return sympy.Poly.from_dict(data, *syms, domain=sympy.QQ)


def _from_sympy_poly(P: sympy.Poly, vars: Sequence[str]) -> MultiPoly:
    terms = {}
    for mono, c in P.terms():
        c = sympy.Rational(c)
        terms[tuple(mono)] = Fraction(int(c.p), int(c.q))
    return MultiPoly(terms, vars)


def elimination_order(k: int):
    """Block order eliminating the first ``k`` variables."""
    return ProductOrder((lex, lambda m: m[:k]), (grevlex, lambda m: m[k:]))


def _basis(gens: Sequence[MultiPoly], vars: Sequence[str], order, budget: GroebnerBudget,
           meter: BudgetMeter | None) -> list[MultiPoly]:
    syms = _symbols(vars)
    polys = [_to_sympy_poly(g, syms) for g in gens if g]
    if not polys:
        return []
    t0 = time.perf_counter()
    G = sympy.groebner(polys, *syms, order=order, method="buchberger", domain=sympy.QQ)
    elapsed = time.perf_counter() - t0
    out = [_from_sympy_poly(P, vars) for P in G.polys]
    if meter is not None:
        meter.record(len(out), elapsed)
    if len(out) > budget.max_basis:
        raise BudgetExceeded(f"basis size {len(out)} over cap {budget.max_basis}")
    if out and max(p.degree() for p in out) > budget.max_degree:
        raise BudgetExceeded(f"basis degree over cap {budget.max_degree}")
    if elapsed > budget.max_seconds:
        raise BudgetExceeded(f"Groebner time {elapsed:.1f}s over cap {budget.max_seconds}s")
    return out


def groebner(ideal: PolyIdeal, order="grevlex", budget: GroebnerBudget = DEFAULT_BUDGET,
             meter: BudgetMeter | None = None) -> PolyIdeal:
    """Reduced Groebner basis of ``ideal`` for the given monomial order.

    Parameters
    ----------
    ideal : PolyIdeal
    order : str or sympy order
        ``"grevlex"`` (default), ``"lex"``, ``"grlex"`` or a block order
        from :func:`elimination_order`.

    Returns
    -------
    PolyIdeal
        The reduced basis; ``[1]`` for the unit ideal, ``[0]`` for zero.
    """
    return PolyIdeal(_basis(ideal.gens, ideal.vars, order, budget, meter), ideal.vars)


def is_unit_ideal(basis: PolyIdeal) -> bool:
    return any(g.degree() == 0 and g for g in basis.gens)


def has_common_zero(system: PolyIdeal | Sequence[MultiPoly], budget: GroebnerBudget = DEFAULT_BUDGET,
                    meter: BudgetMeter | None = None) -> bool:
    """True iff the polynomials have a common zero over the complex numbers."""
    if not isinstance(system, PolyIdeal):
        system = PolyIdeal(system)
    if system.is_zero():
        return True
    if any(g.degree() == 0 for g in system.gens if g):
        return False
    return not is_unit_ideal(groebner(system, budget=budget, meter=meter))


def reduce(p: MultiPoly, basis: PolyIdeal, order="grevlex") -> MultiPoly:
    """Normal form of p modulo a Groebner basis (computed in ``order``)."""
    syms = _symbols(basis.vars)
    gens = [_to_sympy_poly(g, syms) for g in basis.gens if g]
    if not gens:
        return p
    _, r = sympy.reduced(_to_sympy_poly(p, syms), gens, *syms, order=order)
    return _from_sympy_poly(sympy.Poly(r, *syms, domain=sympy.QQ), basis.vars)


def contains(ideal: PolyIdeal, p: MultiPoly, budget: GroebnerBudget = DEFAULT_BUDGET,
             meter: BudgetMeter | None = None) -> bool:
    if not p:
        return True
    G = groebner(ideal, budget=budget, meter=meter)
    return not reduce(p, G)


def contains_all(ideal: PolyIdeal, polys: Iterable[MultiPoly], budget: GroebnerBudget = DEFAULT_BUDGET,
                 meter: BudgetMeter | None = None) -> bool:
    G = groebner(ideal, budget=budget, meter=meter)
    return all(not reduce(p, G) for p in polys if p)


def _fresh(vars: Sequence[str], stem: str = "_s") -> str:
    name = stem
    i = 0
    while name in vars:
        i += 1
        name = f"{stem}{i}"
    return name


def saturate_by(I: PolyIdeal, g: MultiPoly, budget: GroebnerBudget = DEFAULT_BUDGET,
                meter: BudgetMeter | None = None) -> PolyIdeal:
    """I : g^infinity, via the auxiliary relation 1 - s*g."""
    vars = I.vars
    s = _fresh(vars)
    full = (s,) + vars
    sv = MultiPoly.var(s, full)
    rel = MultiPoly.const(1, full) - sv * g.embed(full)
    return _eliminate_lifted([h.embed(full) for h in I.gens] + [rel], 1, vars, budget, meter)


def _eliminate_lifted(gens: Sequence[MultiPoly], k: int, vars: Sequence[str],
                      budget: GroebnerBudget, meter: BudgetMeter | None) -> PolyIdeal:
    full = gens[0].vars
    basis = _basis(gens, full, elimination_order(k), budget, meter)
    kept = []
    for b in basis:
        if all(all(e == 0 for e in m[:k]) for m in b.terms):
            kept.append(MultiPoly({m[k:]: c for m, c in b.terms.items()}, vars))
    return PolyIdeal(kept or [MultiPoly.zero(vars)], vars)


def intersect(I: PolyIdeal, J: PolyIdeal, budget: GroebnerBudget = DEFAULT_BUDGET,
              meter: BudgetMeter | None = None) -> PolyIdeal:
    vars = I.vars
    s = _fresh(vars)
    full = (s,) + vars
    sv = MultiPoly.var(s, full)
    one = MultiPoly.const(1, full)
    gens = [sv * g.embed(full) for g in I.gens] + [(one - sv) * g.embed(full) for g in J.gens]
    return _eliminate_lifted(gens, 1, vars, budget, meter)


def saturate(I: PolyIdeal, J: PolyIdeal, budget: GroebnerBudget = DEFAULT_BUDGET,
             meter: BudgetMeter | None = None) -> PolyIdeal:
    """I : J^infinity, as the intersection of the saturations by each generator of J."""
    gens = [g for g in J.gens if g]
    if not gens:
        return PolyIdeal([MultiPoly.const(1, I.vars)], I.vars)
    out = saturate_by(I, gens[0], budget, meter)
    for g in gens[1:]:
        out = intersect(out, saturate_by(I, g, budget, meter), budget, meter)
    return groebner(out, budget=budget, meter=meter)


def product(I: PolyIdeal, J: PolyIdeal) -> PolyIdeal:
    return PolyIdeal([a * b for a in I.gens for b in J.gens], I.vars)


def power(I: PolyIdeal, d: int) -> PolyIdeal:
    if d < 0:
        raise ValueError("negative power")
    if d == 0:
        return PolyIdeal([MultiPoly.const(1, I.vars)], I.vars)
    gens = []
    for combo in combinations_with_replacement(range(len(I.gens)), d):
        p = MultiPoly.const(1, I.vars)
        for i in combo:
            p = p * I.gens[i]
        gens.append(p)
    return PolyIdeal(gens, I.vars)


def dimension(ideal: PolyIdeal, budget: GroebnerBudget = DEFAULT_BUDGET,
              meter: BudgetMeter | None = None) -> int:
    """Krull dimension of the affine variety V(ideal); -1 when it is empty.

    Read off the grevlex leading monomials: the dimension is the largest size
    of a variable subset containing the support of no leading monomial.
    """
    G = groebner(ideal, budget=budget, meter=meter)
    if is_unit_ideal(G):
        return -1
    n = len(ideal.vars)
    if G.is_zero():
        return n
    leads = []
    syms = _symbols(ideal.vars)
    for g in G.gens:
        P = _to_sympy_poly(g, syms)
        m = P.monoms(order="grevlex")[0]
        leads.append(frozenset(i for i, e in enumerate(m) if e))
    best = 0
    for mask in range(1 << n):
        subset = {i for i in range(n) if mask >> i & 1}
        if len(subset) <= best:
            continue
        if all(not lead <= subset for lead in leads):
            best = len(subset)
    return best


def vanishes_at_origin(ideal: PolyIdeal) -> bool:
    return all(g.constant_term() == 0 for g in ideal.gens)


def origin_is_isolated(ideal: PolyIdeal, budget: GroebnerBudget = DEFAULT_BUDGET,
                       meter: BudgetMeter | None = None) -> bool:
    """True iff the origin is an isolated point of V(ideal) (or not on it).

    Uses I : m^inf = intersection of I : x_i^inf; the origin is isolated iff
    it lies on none of the saturations.
    """
    if not vanishes_at_origin(ideal):
        return True
    if dimension(ideal, budget, meter) <= 0:
        return True
    for v in ideal.vars:
        sat = saturate_by(ideal, MultiPoly.var(v, ideal.vars), budget, meter)
        G = groebner(sat, budget=budget, meter=meter)
        if not is_unit_ideal(G) and vanishes_at_origin(G):
            return False
    return True


def jacobian_ideal(F: MultiPoly, with_f: bool = True) -> PolyIdeal:
    gens = ([F] if with_f else []) + [F.diff(v) for v in F.vars]
    return PolyIdeal(gens, F.vars)


def has_isolated_singularity(F: MultiPoly, budget: GroebnerBudget = DEFAULT_BUDGET,
                             meter: BudgetMeter | None = None) -> bool:
    return origin_is_isolated(jacobian_ideal(F), budget, meter)


def symbolic_power(I: PolyIdeal, d: int, F: MultiPoly | None = None, along: str | None = None,
                   budget: GroebnerBudget = DEFAULT_BUDGET, meter: BudgetMeter | None = None) -> PolyIdeal:
    """Generators of the d-th symbolic power of I modulo (F).

    Computed as (I^d + (F)) : s^inf where ``s`` is a coordinate not vanishing
    identically on V(I) (the parameter along the curve); when omitted the
    saturation is taken with respect to the maximal ideal at the origin.
    The result contains F when F is given.
    """
    if d < 1:
        raise ValueError("symbolic power needs d >= 1")
    base = power(I, d)
    if F is not None:
        base = base + [F]
    if d == 1:
        return groebner(base, budget=budget, meter=meter)
    if along is not None:
        sat = saturate_by(base, MultiPoly.var(along, I.vars), budget, meter)
    else:
        m = PolyIdeal([MultiPoly.var(v, I.vars) for v in I.vars], I.vars)
        sat = saturate(base, m, budget, meter)
    return groebner(sat, budget=budget, meter=meter)
