"""Print the edge selected by integrality and the cycle for small A_n and D_n graphs."""

from divcontract.cycles import DynkinGraph, select_edge


def main():
    for label in ["A4", "A5", "D5", "D6", "D7", "D8", "E6", "E7"]:
        g = DynkinGraph.of(label)
        for v in g.coefficient_one_vertices():
            s = select_edge(g, v)
            coeffs = [int(c) for c in s.coefficients]
            print(f"{label:3s} meets E{v:<2d} -> E = E{s.exceptional}, d = {int(s.d)}, Z = {coeffs}")


if __name__ == "__main__":
    main()
