"""Exact tools for Du Val sections, blow-ups and divisorial contractions to curves."""

from .poly import MultiPoly, PolyParseError, format_poly, parse_poly
from .jets import CoordinateChange, Jet, apply_change, weierstrass_square_reduce

__all__ = [
    "MultiPoly", "PolyParseError", "format_poly", "parse_poly",
    "CoordinateChange", "Jet", "apply_change", "weierstrass_square_reduce",
]
__version__ = "0.1.0"
