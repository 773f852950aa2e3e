"""Factor tests for low-degree forms over the complex numbers.

Every test reduces "does a linear form with the required property exist" to
solvability of a polynomial system in the line's coefficients, decided by
:func:`ideals.has_common_zero`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

import sympy

from . import linalg
from .ideals import PolyIdeal, has_common_zero
from .poly import MultiPoly


class FormError(ValueError):
    pass


def _three_vars(f: MultiPoly, vars: Sequence[str] | None) -> tuple[str, str, str]:
    if vars is None:
        vars = f.vars if len(f.vars) == 3 else f.free_vars()
        if len(vars) < 3:
            extra = [v for v in f.vars if v not in vars]
            vars = tuple(vars) + tuple(extra[: 3 - len(vars)])
    vars = tuple(vars)
    if len(vars) != 3:
        raise FormError("expected a form in exactly three variables")
    if any(f.involves(v) for v in f.vars if v not in vars):
        raise FormError("form involves variables outside the given three")
    return vars


def _line_systems(f: MultiPoly, vars: tuple[str, str, str], affine: bool,
                  with_partials: bool = False) -> list[list[MultiPoly]]:
    """Coefficient systems, one per dual-plane chart, for ``l | f``.

    In chart i the line is ``x_i + a*x_j + b*x_k (+ c)``; substituting
    ``x_i = -a*x_j - b*x_k (- c)`` into f (and its partials when asked)
    must give zero identically.
    """
    unknowns = ("_a", "_b", "_c") if affine else ("_a", "_b")
    ring = unknowns + tuple(f.vars)
    targets = [f] + ([f.diff(v) for v in vars] if with_partials else [])
    targets = [g.embed(ring) for g in targets]
    systems = []
    for i in range(3):
        xi = vars[i]
        xj, xk = [v for v in vars if v != xi]
        img = -(MultiPoly.var("_a", ring) * MultiPoly.var(xj, ring)) \
            - MultiPoly.var("_b", ring) * MultiPoly.var(xk, ring)
        if affine:
            img = img - MultiPoly.var("_c", ring)
        eqs = []
        for g in targets:
            sub = _substitute(g, xi, img)
            eqs.extend(_coefficients_in(sub, tuple(f.vars), unknowns))
        systems.append(eqs)
    return systems


def _substitute(p: MultiPoly, var: str, image: MultiPoly) -> MultiPoly:
    idx = p.vars.index(var)
    out = MultiPoly.zero(p.vars)
    powers = {0: MultiPoly.const(1, p.vars)}
    for m, c in p.terms.items():
        k = m[idx]
        if k not in powers:
            powers[k] = image.pow(k)
        rest = tuple(0 if j == idx else e for j, e in enumerate(m))
        out = out + powers[k].mul_monomial(rest, c)
    return out


def _coefficients_in(p: MultiPoly, outer: tuple, inner: tuple) -> list[MultiPoly]:
    idx_o = [p.vars.index(v) for v in outer]
    idx_i = [p.vars.index(v) for v in inner]
    groups: dict[tuple, dict] = {}
    for m, c in p.terms.items():
        key = tuple(m[i] for i in idx_o)
        groups.setdefault(key, {})[tuple(m[i] for i in idx_i)] = c
    return [MultiPoly(t, inner) for t in groups.values()]


def _homogeneous_cubic(f: MultiPoly) -> None:
    if not f.is_homogeneous() or f.degree() != 3:
        raise FormError("expected a homogeneous cubic")


def linear_factor_exists(f: MultiPoly, vars: Sequence[str] | None = None) -> bool:
    """True iff a linear form over C divides the ternary cubic ``f``.

    A nonzero ternary cubic is reducible over C exactly when this holds.
    """
    if not f:
        raise FormError("zero form; the caller decides")
    _homogeneous_cubic(f)
    v3 = _three_vars(f, vars)
    return any(has_common_zero(PolyIdeal(eqs)) for eqs in _line_systems(f, v3, affine=False))


def is_irreducible_cubic(f: MultiPoly, vars: Sequence[str] | None = None) -> bool:
    return bool(f) and not linear_factor_exists(f, vars)


def proper_component_through_origin(f: MultiPoly, vars: Sequence[str] | None = None) -> bool:
    """True iff ``f = g*h`` with both factors non-constant.

    f has degree at most 3 and no constant term, so any nontrivial
    factorization has an affine linear factor, and some irreducible factor
    then vanishes at the origin.
    """
    if not f:
        raise FormError("zero polynomial; the caller decides")
    if f.constant_term() != 0:
        raise FormError("constant term present")
    if f.degree() > 3:
        raise FormError("degree above 3")
    if f.degree() <= 1:
        return False
    v3 = _three_vars(f, vars)
    return any(has_common_zero(PolyIdeal(eqs)) for eqs in _line_systems(f, v3, affine=True))


def square_linear_divisor_exists(f: MultiPoly, vars: Sequence[str] | None = None) -> bool:
    """True iff ``f = g * h^2`` with h linear (f = 0 counts as such).

    h^2 | f iff h divides f and all its first partials.
    """
    if not f:
        return True
    _homogeneous_cubic(f)
    v3 = _three_vars(f, vars)
    return any(has_common_zero(PolyIdeal(eqs))
               for eqs in _line_systems(f, v3, affine=False, with_partials=True))


def binary_cubic_pattern(h: MultiPoly, v: str, w: str) -> str:
    """Root pattern of a nonzero binary cubic: 'distinct', 'double' or 'triple'.

    Uses the exact gcd of the two partial derivatives (Euler's relation makes
    it a multiple of gcd(h, h')).
    """
    _homogeneous_cubic(h)
    syms = sympy.symbols([v, w])
    hv = h.diff(v).to_sympy(sympy.symbols(h.vars))
    hw = h.diff(w).to_sympy(sympy.symbols(h.vars))
    g = sympy.Poly(sympy.gcd(hv, hw), *syms)
    deg = g.total_degree() if not g.is_zero else 2
    return {0: "distinct", 1: "double", 2: "triple"}[deg]


def quadratic_matrix(q: MultiPoly, vars: Sequence[str]) -> list[list[Fraction]]:
    """Symmetric Gram matrix of the degree-2 part of q in the given variables."""
    n = len(vars)
    idx = [q.vars.index(v) for v in vars]
    M = [[Fraction(0)] * n for _ in range(n)]
    for m, c in q.homogeneous_part(2).terms.items():
        support = [(k, m[i]) for k, i in enumerate(idx) if m[i]]
        if sum(e for _, e in support) != 2:
            continue
        if len(support) == 1:
            k = support[0][0]
            M[k][k] += c
        else:
            (k, _), (l, _) = support
            M[k][l] += c / 2
            M[l][k] += c / 2
    return M


def quadratic_rank(q: MultiPoly, vars: Sequence[str] | None = None) -> int:
    return linalg.rank(quadratic_matrix(q, vars or q.vars))


def square_test_q2(q: MultiPoly, vars: Sequence[str] | None = None) -> bool:
    """True iff the quadratic form is (a constant times) a square of a linear form.

    Decided by rank <= 1 of the Gram matrix, i.e. all 2x2 minors vanish.
    """
    M = quadratic_matrix(q, vars or q.vars)
    n = len(M)
    for r in combinations(range(n), 2):
        for c in combinations(range(n), 2):
            if M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]] != 0:
                return False
    return True


def square_test_closed_form(q: MultiPoly, vars: Sequence[str] = ("x", "y", "z")) -> bool:
    """The coefficient condition a1 = a4 = a5 = 0 and 4*a2*a3 = a6^2.

    Kept for comparison with :func:`square_test_q2`; it describes squares
    not involving the first variable only.
    """
    x, y, z = vars
    e = lambda **k: tuple(k.get(v, 0) for v in q.vars)
    a1, a2, a3 = q.coeff(e(**{x: 2})), q.coeff(e(**{y: 2})), q.coeff(e(**{z: 2}))
    a4, a5, a6 = q.coeff(e(**{x: 1, y: 1})), q.coeff(e(**{x: 1, z: 1})), q.coeff(e(**{y: 1, z: 1}))
    return a1 == 0 and a4 == 0 and a5 == 0 and 4 * a2 * a3 == a6 * a6
