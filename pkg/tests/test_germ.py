import pytest

from divcontract.germ import Germ3Fold, GermError, frame
from divcontract.poly import MultiPoly, parse_poly

V4 = ("x", "y", "z", "t")


def test_frame_of_linear_curve_is_exact_identity():
    fr = frame([parse_poly(s, V4) for s in ("x", "y", "t")])
    assert fr.targets == ("x", "y", "t") and fr.free == ("z",)
    assert fr.exact and fr.change.is_identity()


def test_frame_of_curved_curve():
    gens = [parse_poly(s, V4) for s in ("x-z^2", "y-z^3", "t")]
    fr = frame(gens)
    for g, v in zip(gens, fr.targets):
        assert fr.pull(g).truncate(12) == MultiPoly.var(v, V4)


def test_germ_validation():
    with pytest.raises(GermError):
        Germ3Fold.from_strings("x^2+y^2+z^2+1", ["x", "y", "z"])
    with pytest.raises(GermError):
        Germ3Fold.from_strings("x^2+y^2+t", ["x", "y", "z"])
    with pytest.raises(GermError):
        Germ3Fold.from_strings("x^2+y^2", ["x", "y"])
    g = Germ3Fold.from_strings("x^2+y^2+z*t", ["x", "y", "z"])
    assert g.multiplicity == 2 and g.is_cdv_candidate
    assert g.to_json()["I"] == ["x", "y", "z"]
