"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`MultiPoly` is an immutable map from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients over an ordered tuple of variable
names.  Truncated arithmetic (``order=N``) drops every term of total degree
above ``N`` and is what the jet layer builds on.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

DEFAULT_VARS = ("x", "y", "z", "t")

Monomial = tuple


class PolyParseError(ValueError):
    """Raised on malformed polynomial text; carries the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    return Fraction(c)


class MultiPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None,
                 vars: Sequence[str] = DEFAULT_VARS):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for mono, c in (terms or {}).items():
            c = _coerce(c)
            if c == 0:
                continue
            mono = tuple(mono)
            if len(mono) != n:
                raise ValueError(f"exponent {mono} does not match {n} variables")
            clean[mono] = c
        self.terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict, vars: tuple) -> "MultiPoly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, vars: Sequence[str] = DEFAULT_VARS) -> "MultiPoly":
        return cls._raw({}, tuple(vars))

    @classmethod
    def const(cls, c, vars: Sequence[str] = DEFAULT_VARS) -> "MultiPoly":
        vars = tuple(vars)
        c = _coerce(c)
        return cls._raw({(0,) * len(vars): c} if c else {}, vars)

    @classmethod
    def var(cls, name: str, vars: Sequence[str] = DEFAULT_VARS) -> "MultiPoly":
        vars = tuple(vars)
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls._raw({tuple(e): Fraction(1)}, vars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1,
                 vars: Sequence[str] = DEFAULT_VARS) -> "MultiPoly":
        return cls({tuple(exps): coeff}, vars)

    def gens(self) -> list["MultiPoly"]:
        return [MultiPoly.var(v, self.vars) for v in self.vars]

    # basic queries ---------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                return False
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.const(other, self.vars)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def order(self) -> int | None:
        """Lowest total degree of a term; ``None`` for zero."""
        return min((sum(m) for m in self.terms), default=None)

    def degree_in(self, var: str) -> int:
        i = self.vars.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._raw({m: c for m, c in self.terms.items() if sum(m) == d}, self.vars)

    def truncate(self, order: int) -> "MultiPoly":
        return MultiPoly._raw({m: c for m, c in self.terms.items() if sum(m) <= order}, self.vars)

    def part_up_to(self, order: int) -> "MultiPoly":
        return self.truncate(order)

    def part_from(self, order: int) -> "MultiPoly":
        return MultiPoly._raw({m: c for m, c in self.terms.items() if sum(m) >= order}, self.vars)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def involves(self, var: str) -> bool:
        i = self.vars.index(var)
        return any(m[i] for m in self.terms)

    def free_vars(self) -> tuple[str, ...]:
        return tuple(v for v in self.vars if self.involves(v))

    # arithmetic ------------------------------------------------------------
    def _check(self, other: "MultiPoly") -> None:
        if other.vars != self.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _wrap(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(other, self.vars)

    def __add__(self, other) -> "MultiPoly":
        other = self._wrap(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly._raw(out, self.vars)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self.terms.items()}, self.vars)

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._wrap(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._wrap(other) - self

    def mul(self, other, order: int | None = None) -> "MultiPoly":
        """Product, dropping terms of total degree above ``order`` when given."""
        other = self._wrap(other)
        out: dict = {}
        if order is None:
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    out[m] = out.get(m, 0) + c1 * c2
        else:
            right = [(m, c, sum(m)) for m, c in other.terms.items()]
            for m1, c1 in self.terms.items():
                d1 = sum(m1)
                if d1 > order:
                    continue
                room = order - d1
                for m2, c2, d2 in right:
                    if d2 > room:
                        continue
                    m = tuple(a + b for a, b in zip(m1, m2))
                    out[m] = out.get(m, 0) + c1 * c2
        return MultiPoly._raw({m: c for m, c in out.items() if c}, self.vars)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.mul(other)

    def __rmul__(self, other) -> "MultiPoly":
        return self * other

    def scale(self, c) -> "MultiPoly":
        c = _coerce(c)
        if c == 0:
            return MultiPoly.zero(self.vars)
        return MultiPoly._raw({m: v * c for m, v in self.terms.items()}, self.vars)

    def __truediv__(self, c) -> "MultiPoly":
        if isinstance(c, MultiPoly):
            q, r = self.divmod_exact(c)
            if r:
                raise ArithmeticError("polynomial division is not exact")
            return q
        return self.scale(1 / _coerce(c))

    def pow(self, k: int, order: int | None = None) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result.mul(base, order)
            k >>= 1
            if k:
                base = base.mul(base, order)
        return result

    def __pow__(self, k: int) -> "MultiPoly":
        return self.pow(k)

    def mul_monomial(self, exps: Sequence[int], coeff=1) -> "MultiPoly":
        coeff = _coerce(coeff)
        return MultiPoly._raw(
            {tuple(a + b for a, b in zip(m, exps)): c * coeff for m, c in self.terms.items()},
            self.vars)

    def diff(self, var: str) -> "MultiPoly":
        i = self.vars.index(var)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return MultiPoly._raw(out, self.vars)

    def divide_by_var_power(self, var: str, k: int) -> "MultiPoly":
        """Exact division by ``var**k``; raises if some term is not divisible."""
        i = self.vars.index(var)
        out = {}
        for m, c in self.terms.items():
            if m[i] < k:
                raise ArithmeticError(f"term {m} not divisible by {var}^{k}")
            e = list(m)
            e[i] -= k
            out[tuple(e)] = c
        return MultiPoly._raw(out, self.vars)

    def var_adic_order(self, var: str) -> int | None:
        """Largest k with ``var**k`` dividing self (None for zero)."""
        i = self.vars.index(var)
        return min((m[i] for m in self.terms), default=None)

    def subs_const(self, values: Mapping[str, object]) -> "MultiPoly":
        """Substitute rational constants for some variables (arity unchanged)."""
        idx = {self.vars.index(v): _coerce(c) for v, c in values.items()}
        out: dict = {}
        for m, c in self.terms.items():
            e = list(m)
            for i, val in idx.items():
                if e[i]:
                    c = c * val ** e[i]
                    e[i] = 0
            if c:
                key = tuple(e)
                out[key] = out.get(key, 0) + c
        return MultiPoly._raw({m: c for m, c in out.items() if c}, self.vars)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        pt = [_coerce(p) for p in point]
        for m, c in self.terms.items():
            v = c
            for e, p in zip(m, pt):
                if e:
                    v *= p ** e
            total += v
        return total

    def rename(self, vars: Sequence[str]) -> "MultiPoly":
        vars = tuple(vars)
        if len(vars) != len(self.vars):
            raise ValueError("rename must keep the arity")
        return MultiPoly._raw(dict(self.terms), vars)

    def embed(self, vars: Sequence[str]) -> "MultiPoly":
        """Re-express over a variable list containing every variable used."""
        vars = tuple(vars)
        used = self.free_vars()
        for v in used:
            if v not in vars:
                raise ValueError(f"variable {v} missing from {vars}")
        pos = [vars.index(v) if v in vars else None for v in self.vars]
        out = {}
        for m, c in self.terms.items():
            e = [0] * len(vars)
            for i, k in enumerate(m):
                if k:
                    e[pos[i]] = k
            out[tuple(e)] = c
        return MultiPoly._raw(out, vars)

    def split_by(self, var: str) -> dict[int, "MultiPoly"]:
        """Coefficients with respect to ``var``: {power: poly free of var}."""
        i = self.vars.index(var)
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = list(m)
            k = e[i]
            e[i] = 0
            out.setdefault(k, {})[tuple(e)] = c
        return {k: MultiPoly._raw(v, self.vars) for k, v in out.items()}

    def content_denominator(self) -> int:
        from math import lcm
        d = 1
        for c in self.terms.values():
            d = lcm(d, c.denominator)
        return d

    def primitive(self) -> "MultiPoly":
        """Scale to integer coefficients with positive leading coefficient."""
        if not self.terms:
            return self
        from math import gcd
        p = self.scale(self.content_denominator())
        g = 0
        for c in p.terms.values():
            g = gcd(g, int(c))
        p = p.scale(Fraction(1, g))
        lead = p.terms[p.sorted_monomials()[0]]
        return p if lead > 0 else -p

    def divmod_exact(self, other: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        """Multivariate division by a single polynomial (graded lex order)."""
        other = self._wrap(other)
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        lm = other.sorted_monomials()[0]
        lc = other.terms[lm]
        q = MultiPoly.zero(self.vars)
        r = MultiPoly.zero(self.vars)
        p = self
        while p:
            m = p.sorted_monomials()[0]
            c = p.terms[m]
            if all(a >= b for a, b in zip(m, lm)):
                shift = tuple(a - b for a, b in zip(m, lm))
                q = q + MultiPoly({shift: c / lc}, self.vars)
                p = p - other.mul_monomial(shift, c / lc)
            else:
                r = r + MultiPoly({m: c}, self.vars)
                p = p - MultiPoly({m: c}, self.vars)
        return q, r

    # ordering and printing -------------------------------------------------
    def sorted_monomials(self) -> list[Monomial]:
        """Monomials in descending graded lexicographic order."""
        return sorted(self.terms, key=lambda m: (sum(m), m), reverse=True)

    def leading_term(self) -> tuple[Monomial, Fraction]:
        m = self.sorted_monomials()[0]
        return m, self.terms[m]

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r}, vars={self.vars})"

    def to_sympy(self, symbols=None):
        import sympy
        syms = symbols or sympy.symbols(self.vars)
        expr = sympy.Integer(0)
        for m, c in self.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for s, e in zip(syms, m):
                if e:
                    term *= s ** e
            expr += term
        return expr


def _mono_str(m: Monomial, vars: Sequence[str]) -> str:
    parts = []
    for v, e in zip(vars, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    """Canonical text: descending graded-lex terms, explicit ``*`` and ``^``."""
    if not p.terms:
        return "0"
    out = []
    for i, m in enumerate(p.sorted_monomials()):
        c = p.terms[m]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = _mono_str(m, p.vars)
        if not body:
            text = str(a)
        elif a == 1:
            text = body
        else:
            text = f"{a}*{body}"
        if i == 0:
            out.append(text if sign == "+" else f"-{text}")
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise PolyParseError(f"unexpected character {text[pos + stripped]!r}", pos + stripped)
        start = mt.start(mt.lastindex)
        if mt.group(1):
            toks.append(("num", mt.group(1), start))
        elif mt.group(2):
            toks.append(("name", mt.group(2), start))
        else:
            op = mt.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = mt.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, vars: tuple[str, ...]):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = vars

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value or tok[0] != "op":
            raise PolyParseError(f"expected {value!r}", tok[2])

    def parse(self) -> MultiPoly:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolyParseError(f"unexpected token {tok[1]!r}", tok[2])
        return p

    def expr(self) -> MultiPoly:
        p = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MultiPoly:
        p = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            q = self.unary()
            if tok[1] == "*":
                p = p * q
            else:
                if q.degree() > 0 or not q:
                    raise PolyParseError("division only by nonzero constants", tok[2])
                p = p / q.constant_term()
        return p

    def unary(self) -> MultiPoly:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            p = self.unary()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            etok = self.take()
            if etok[0] != "num":
                raise PolyParseError("exponent must be a nonnegative integer", etok[2])
            return base.pow(int(etok[1]))
        return base

    def atom(self) -> MultiPoly:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return MultiPoly.const(int(val), self.vars)
        if kind == "name":
            if val not in self.vars:
                raise PolyParseError(f"unknown variable {val!r}", pos)
            return MultiPoly.var(val, self.vars)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise PolyParseError(f"unexpected token {val!r}" if val else "unexpected end of input", pos)


def parse_poly(text: str, vars: Sequence[str] = DEFAULT_VARS) -> MultiPoly:
    """Parse an expression in the listed variables into canonical sparse form.

    Accepts integer literals, rationals written with ``/``, ``+ - * ^``
    (``**`` is an alias for ``^``) and parentheses.

    >>> str(parse_poly("(x+y)^2 - x^2 - 2*x*y"))
    'y^2'
    """
    return _Parser(text, tuple(vars)).parse()


def poly_from_sympy(expr, vars: Sequence[str]) -> MultiPoly:
    import sympy
    syms = sympy.symbols(tuple(vars))
    P = sympy.Poly(expr, *syms)
    terms = {}
    for mono, c in P.terms():
        c = sympy.Rational(c)
        terms[tuple(mono)] = Fraction(int(c.p), int(c.q))
    return MultiPoly(terms, vars)


def lcm_list(values: Iterable[int]) -> int:
    from math import lcm
    out = 1
    for v in values:
        out = lcm(out, v)
    return out
