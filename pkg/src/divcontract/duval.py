"""Recognition of Du Val (ADE) surface singularities from a jet.

The pipeline splits off squares (splitting lemma) and then reads the type
from the residual: its order in the corank-1 case, its cubic part and Milnor
number in the corank-2 case.  A type is only returned when the jet order is
at least its determinacy degree; otherwise the result is ``Undetermined``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import factors, linalg
from .jets import DEFAULT_ORDER, CoordinateChange, Jet, split_u_linear
from .poly import MultiPoly

FAMILIES = ("Smooth", "A", "D", "E", "NotDuVal", "Undetermined")


class NotAGerm(ValueError):
    pass


@dataclass(frozen=True, order=False)
class DuValType:
    """An ADE label, or one of Smooth / NotDuVal / Undetermined.

    ``index`` is n for A_n and D_n, 6/7/8 for E, and the insufficient jet
    order for Undetermined.
    """

    family: str
    index: int = 0
    note: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family}")
        if self.family == "A" and self.index < 1:
            raise ValueError("A_n needs n >= 1")
        if self.family == "D" and self.index < 4:
            raise ValueError("D_n needs n >= 4")
        if self.family == "E" and self.index not in (6, 7, 8):
            raise ValueError("E_n needs n in 6, 7, 8")

    @property
    def is_du_val(self) -> bool:
        return self.family in ("A", "D", "E")

    @property
    def label(self) -> str:
        if self.family in ("A", "D", "E"):
            return f"{self.family}{self.index}"
        if self.family == "Undetermined":
            return f"Undetermined(N={self.index})"
        return self.family

    def __str__(self):
        return self.label

    @classmethod
    def parse(cls, text: str) -> "DuValType":
        text = text.strip()
        if text in ("Smooth", "NotDuVal"):
            return cls(text)
        fam, num = text[0].upper(), text[1:]
        if fam not in "ADE" or not num.isdigit():
            raise ValueError(f"cannot parse Du Val type {text!r}")
        return cls(fam, int(num))

    def to_json(self) -> dict:
        out = {"family": self.family, "label": self.label}
        if self.family != "Smooth" and self.family != "NotDuVal":
            out["index"] = self.index
        if self.note:
            out["note"] = self.note
        return out


def determinacy(t: DuValType) -> int:
    """Degree of finite determinacy of an ADE germ."""
    if t.family == "A":
        return t.index + 1
    if t.family == "D":
        return t.index - 1
    if t.family == "E":
        return 4 if t.index == 6 else 5
    return 1


@dataclass(frozen=True)
class SurfaceGerm:
    """A surface germ f = 0 at the origin, known up to jet order ``order``."""

    f: MultiPoly
    order: int = DEFAULT_ORDER
    claimed_multiplicity: int | None = None

    def __post_init__(self):
        if len(self.f.vars) != 3:
            raise NotAGerm("a surface germ needs exactly three variables")
        if self.f.constant_term() != 0:
            raise NotAGerm("f does not vanish at the origin")

    @property
    def jet(self) -> Jet:
        return Jet(self.f, self.order)


@dataclass
class Classification:
    type: DuValType
    order: int
    quadratic_rank: int | None = None
    milnor: int | None = None
    residual: str | None = None
    steps: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"type": self.type.to_json(), "jet_order": self.order,
               "order_sufficient": self.type.family != "Undetermined"}
        if self.quadratic_rank is not None:
            out["quadratic_rank"] = self.quadratic_rank
        if self.milnor is not None:
            out["milnor_number"] = self.milnor
        if self.residual is not None:
            out["residual"] = self.residual
        return out


# intersection multiplicity -------------------------------------------------

INFINITE = None


def _uni_degree_and_lead(p: MultiPoly, xi: int, yi: int):
    """Degree and leading coefficient of p(x, 0) as a polynomial in x."""
    best, lead = -1, Fraction(0)
    for m, c in p.terms.items():
        if m[yi] == 0 and m[xi] > best:
            best, lead = m[xi], c
    return best, lead


def _ord_on_line(p: MultiPoly, xi: int, yi: int) -> int | None:
    ords = [m[xi] for m in p.terms if m[yi] == 0]
    return min(ords) if ords else None


def intersection_multiplicity(F: MultiPoly, G: MultiPoly, x: str, y: str, limit: int = 10_000,
                              modulo: int | None = None) -> int | None:
    """Local intersection number I_0(F, G) of two plane curves (Fulton's algorithm).

    F and G are polynomials in the two variables ``x`` and ``y`` (other
    variables must not occur).  Returns ``None`` when F and G share a
    component through the origin.

    With ``modulo = K`` the inputs are only known modulo m^K.  Both curves
    are then truncated after every step (the modulus drops by one with each
    division by y); an answer below K is exact because m^(K-1) lies in the
    local ideal, and anything else is reported as ``None``.
    """
    vars = F.vars
    xi, yi = vars.index(x), vars.index(y)
    K = modulo
    total = 0

    def cut(p: MultiPoly) -> MultiPoly:
        return p if K is None else p.truncate(K - 1)

    F, G = cut(F).primitive(), cut(G).primitive()
    for _ in range(limit):
        if K is not None and (K <= 0 or total >= modulo):
            return INFINITE
        if not F or not G:
            return INFINITE
        if F.constant_term() != 0 or G.constant_term() != 0:
            return total if modulo is None or total < modulo else INFINITE
        r, lf = _uni_degree_and_lead(F, xi, yi)
        s, lg = _uni_degree_and_lead(G, xi, yi)
        if r < 0 and s < 0:
            return INFINITE
        if r < 0 or s < 0:
            if s < 0:
                F, G = G, F
            # F = y * H
            total += _ord_on_line(G, xi, yi)
            F = F.divide_by_var_power(y, 1)
            if K is not None:
                K -= 1
                F, G = cut(F), cut(G)
            continue
        if r > s:
            F, G, r, s, lf, lg = G, F, s, r, lg, lf
        e = [0] * len(vars)
        e[xi] = s - r
        G = cut(G.scale(lf) - F.mul_monomial(e, lg)).primitive()
    raise ArithmeticError("intersection multiplicity did not terminate")


def milnor_number_2var(h: MultiPoly, v: str, w: str, order: int | None = None) -> int | None:
    """Milnor number of h(v, w); with ``order`` h is a jet known up to that degree."""
    return intersection_multiplicity(h.diff(v), h.diff(w), v, w, modulo=order)


# splitting -----------------------------------------------------------------

def _diagonal_coeff(f: MultiPoly, v: str) -> Fraction:
    e = [0] * len(f.vars)
    e[f.vars.index(v)] = 2
    return f.coeff(e)


def split_squares(f: MultiPoly, order: int) -> tuple[MultiPoly, list[str], list[str], CoordinateChange]:
    """Split off every nondegenerate square of the quadratic part.

    Returns ``(g, split, rest, change)`` with ``g = f o change``, every term
    of g having degree 0 or >= 2 in each split variable, and the quadratic
    part of g restricted to ``rest`` equal to zero.
    """
    vars = f.vars
    change = CoordinateChange.identity(vars)
    g = f.truncate(order)
    split: list[str] = []
    rest = list(vars)
    while True:
        M = factors.quadratic_matrix(g.subs_const({v: 0 for v in split}) if split else g, rest)
        if all(c == 0 for row in M for c in row):
            break
        piv = next((v for k, v in enumerate(rest) if M[k][k] != 0), None)
        if piv is None:
            i, j = next((i, j) for i in range(len(rest)) for j in range(len(rest)) if i != j and M[i][j] != 0)
            a, b = rest[i], rest[j]
            step = CoordinateChange({a: MultiPoly.var(a, vars) + MultiPoly.var(b, vars)}, vars)
            g = step.apply(g, order)
            change = change.then(step, order)
            piv = b
        g, step = split_u_linear(g, piv, order)
        change = change.then(step, order)
        split.append(piv)
        rest.remove(piv)
    return g, split, rest, change


def _residual(g: MultiPoly, split: Sequence[str], rest: Sequence[str]) -> MultiPoly:
    h = g.subs_const({v: 0 for v in split})
    return MultiPoly({tuple(m[g.vars.index(v)] for v in rest): c for m, c in h.terms.items()}, tuple(rest))


def classify(g: SurfaceGerm | MultiPoly | Jet, order: int | None = None) -> Classification:
    """Classify with an evidence record; see :func:`classify_duval`."""
    if isinstance(g, Jet):
        g = SurfaceGerm(g.poly, g.order if order is None else min(order, g.order))
    elif isinstance(g, MultiPoly):
        g = SurfaceGerm(g, order or DEFAULT_ORDER)
    elif order is not None:
        g = SurfaceGerm(g.f, min(order, g.order))
    N = g.order
    f = g.f.truncate(N)
    if f.constant_term() != 0:
        raise NotAGerm("f does not vanish at the origin")
    if not f:
        return Classification(DuValType("Undetermined", N, "jet vanishes"), N)
    o = f.order()
    if o == 1:
        return Classification(DuValType("Smooth"), N)
    if o >= 3:
        return Classification(DuValType("NotDuVal", 0, "multiplicity >= 3"), N)
    q, split, rest, _ = split_squares(f, N)
    r = len(split)
    h = _residual(q, split, rest)
    out = Classification(DuValType("Undetermined", N), N, quadratic_rank=r, residual=str(h))
    if r == 3:
        out.type = DuValType("A", 1)
        out.milnor = 1
        return out
    if r == 2:
        k = h.order()
        if k is None:
            out.type = DuValType("Undetermined", N, "residual vanishes to jet order")
            return out
        out.type = DuValType("A", k - 1)
        out.milnor = k - 1
        return out
    v, w = rest
    h3 = h.homogeneous_part(3)
    if not h3:
        out.type = DuValType("NotDuVal", 0, "corank 2 with vanishing cubic term")
        return out
    pattern = factors.binary_cubic_pattern(h3, v, w)
    if pattern == "distinct":
        out.type = DuValType("D", 4)
        out.milnor = 4
        return out
    # modulo m^N only certifies mu <= N - 1; small jets use the jet itself
    mu = milnor_number_2var(h, v, w, N if N >= 9 else None)
    out.milnor = mu
    if pattern == "triple":
        if N < 5:
            out.type = DuValType("Undetermined", N, "E series needs jet order 5")
        elif mu in (6, 7, 8):
            out.type = DuValType("E", mu)
        else:
            out.type = DuValType("NotDuVal", 0, "triple cubic factor, not E6/E7/E8")
        return out
    if mu is None or mu - 1 > N:
        out.type = DuValType("Undetermined", N, "D index not certified at this jet order")
        return out
    out.type = DuValType("D", mu)
    return out


def classify_duval(g: SurfaceGerm | MultiPoly | Jet, order: int | None = None) -> DuValType:
    """Du Val type of an isolated surface germ, decided from its jet.

    Parameters
    ----------
    g : SurfaceGerm, MultiPoly or Jet
        The germ f(u, v, w) with f(0) = 0.
    order : int, optional
        Jet order N; defaults to the germ's own order (12).

    Returns
    -------
    DuValType
        ``Smooth``, ``A_n``, ``D_n``, ``E_6/7/8``, ``NotDuVal``, or
        ``Undetermined`` when N is below the determinacy degree needed.
    """
    return classify(g, order).type
