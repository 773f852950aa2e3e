"""Decide a handful of germs and print one line per verdict."""

from divcontract import oracle
from divcontract.germ import Germ3Fold

GERMS = [
    ("x^2+y^2*z+z^3+t^5", ["x", "z", "t"]),
    ("x^2+y^2*z+z^3+t^3", ["x", "z", "t"]),
    ("x^2+y^2*z+z^5+t^4", ["x", "z", "t"]),
    ("x^2+y^3+z^3+y*t^6", ["x", "y", "z"]),
    ("x^2+y^2*z+2*y*z^3+t^3", ["x", "y", "t"]),
    ("x^2+y^2*z+2*y*z^3+t^5", ["x", "y", "t"]),
    ("x^2+y^2*z+2*x*z^3+t^3", ["x", "y", "t"]),
    ("x^2+y^2+z*t", ["x", "y", "z"]),
    ("x*y-z^5+t^3", ["x-z^2", "y-z^3", "t"]),
]


def main():
    for F, I in GERMS:
        v = oracle.decide_contraction(Germ3Fold.from_strings(F, I))
        chart = v.cross_check.chart.regime if v.cross_check else "-"
        extra = v.payload.higher_index_points if v.payload else ""
        print(f"{F:28s} I=({', '.join(I)}): {v.kind:14s} {v.stratum:18s} charts={chart} {extra}")


if __name__ == "__main__":
    main()
