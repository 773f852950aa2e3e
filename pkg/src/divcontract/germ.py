"""Curve germs inside hypersurface germs, and coordinates straightening them."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from . import linalg
from .ideals import PolyIdeal
from .jets import DEFAULT_ORDER, CoordinateChange, NotACoordinateChange, compose, straighten
from .poly import MultiPoly


class GermError(ValueError):
    pass


def _linear_row(g: MultiPoly) -> list:
    n = len(g.vars)
    return [g.coeff(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)]


@dataclass(frozen=True)
class CurveFrame:
    """Coordinates in which a smooth complete intersection V(gens) is linear.

    ``change`` satisfies ``gens[i] o change == targets[i]``; ``free`` is the
    remaining variable (a parameter along the curve when there is one).
    ``exact`` records that the identity holds for all degrees, not only up to
    the jet order.
    """

    vars: tuple[str, ...]
    gens: tuple[MultiPoly, ...]
    targets: tuple[str, ...]
    free: tuple[str, ...]
    change: CoordinateChange
    exact: bool
    order: int

    def pull(self, F: MultiPoly) -> MultiPoly:
        return self.change.apply(F, None if self.exact else self.order)

    def in_curve_ideal_order(self, G: MultiPoly) -> int | None:
        """Largest mu with G in (targets)^mu, for G already pulled back."""
        idx = [self.vars.index(v) for v in self.targets]
        if not G:
            return None
        return min(sum(m[i] for i in idx) for m in G.terms)


def frame(gens: Sequence[MultiPoly], order: int = DEFAULT_ORDER) -> CurveFrame:
    """Straighten a set of generators with independent linear parts."""
    gens = tuple(gens)
    if not gens:
        raise GermError("no generators")
    vars = gens[0].vars
    rows = [_linear_row(g) for g in gens]
    if linalg.rank(rows) < len(gens):
        raise NotACoordinateChange("generators do not have independent linear parts")
    k = len(gens)
    best = None
    for targets in permutations(range(len(vars)), k):
        M = [[rows[i][targets[j]] for j in range(k)] for i in range(k)]
        if linalg.bareiss_det(M) == 0:
            continue
        exact_hits = sum(1 for i in range(k) if all(
            (c != 0) == (j == targets[i]) for j, c in enumerate(rows[i])))
        diag = sum(1 for i in range(k) if rows[i][targets[i]] != 0)
        unused = sum(1 for j in range(len(vars)) if j not in targets and all(r[j] == 0 for r in rows))
        score = (exact_hits, unused, diag, [-j for j in targets])
        if best is None or score > best[0]:
            best = (score, targets)
    tnames = tuple(vars[j] for j in best[1])
    change = straighten(list(gens), list(tnames), order)
    exact = all(compose(g, change.images, None) == MultiPoly.var(v, vars) for g, v in zip(gens, tnames))
    free = tuple(v for v in vars if v not in tnames)
    return CurveFrame(vars, gens, tnames, free, change, exact, order)


@dataclass(frozen=True)
class Germ3Fold:
    """A hypersurface germ X = (F = 0) in C^4 with a smooth curve Gamma = V(I).

    The ideal has three generators with independent linear parts and F lies
    in it.  ``order`` is the jet order used for all series manipulations.
    """

    F: MultiPoly
    I: PolyIdeal
    order: int = DEFAULT_ORDER
    roles: tuple[str, ...] = ("x", "y", "z", "t")

    def __post_init__(self):
        if len(self.F.vars) != 4:
            raise GermError("a 3-fold germ needs four variables")
        if self.F.constant_term() != 0:
            raise GermError("F does not vanish at the origin")
        if len(self.I.gens) != 3:
            raise GermError("the curve ideal needs exactly three generators")
        gens = tuple(g.embed(self.F.vars) if g.vars != self.F.vars else g for g in self.I.gens)
        object.__setattr__(self, "I", PolyIdeal(gens, self.F.vars))
        fr = frame(self.I.gens, self.order)
        object.__setattr__(self, "_frame", fr)
        G = fr.pull(self.F).truncate(self.order)
        on_curve = G.subs_const({v: 0 for v in fr.targets})
        if on_curve:
            raise GermError("F does not vanish on the curve")

    @classmethod
    def from_strings(cls, F: str, gens: Sequence[str], order: int = DEFAULT_ORDER,
                     vars: Sequence[str] = ("x", "y", "z", "t")) -> "Germ3Fold":
        from .poly import parse_poly
        vars = tuple(vars)
        return cls(parse_poly(F, vars), PolyIdeal([parse_poly(g, vars) for g in gens], vars), order)

    @property
    def frame(self) -> CurveFrame:
        return self._frame

    @property
    def vars(self) -> tuple[str, ...]:
        return self.F.vars

    @property
    def multiplicity(self) -> int:
        return self.F.truncate(self.order).order()

    @property
    def is_cdv_candidate(self) -> bool:
        return self.multiplicity == 2

    def to_json(self) -> dict:
        return {"F": str(self.F), "I": [str(g) for g in self.I.gens], "jet_order": self.order}
