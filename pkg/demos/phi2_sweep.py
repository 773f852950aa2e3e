"""Compare the cubic test with the chart computation on x^2+y^2z+2yz^3+t*phi2+t^4.

phi2 = a1 y^2 + a2 t^2 + a3 y t + a4 y z + a5 z t with coefficients in {-1, 0, 1}.
"""

import itertools
from collections import Counter

from divcontract import oracle
from divcontract.germ import Germ3Fold


def main():
    tally = Counter()
    for a in itertools.product((-1, 0, 1), repeat=5):
        a1, a2, a3, a4, a5 = a
        phi = f"({a1})*y^2+({a2})*t^2+({a3})*y*t+({a4})*y*z+({a5})*z*t"
        g = Germ3Fold.from_strings(f"x^2+y^2*z+2*y*z^3+t*({phi})+t^4", ["x", "y", "t"])
        locus = "a2=a5=0" if a2 == 0 == a5 else "off locus"
        try:
            v = oracle.decide_contraction(g)
            tally[(locus, v.kind, v.cross_check.chart.regime)] += 1
        except oracle.CrossCheckError as exc:
            tally[(locus, f"disagree:{exc.record.criterion}", exc.record.chart.regime)] += 1
    for key, n in sorted(tally.items()):
        print(f"{n:4d}  {key}")


if __name__ == "__main__":
    main()
