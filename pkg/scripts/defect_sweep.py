"""Defects dim(nabla_n X) - d*length(n) of a few curves along the l_n."""

import argparse

from schemic.arckit import defect, make_point_system
from schemic.exactalg import FieldSpec
from schemic.schemekit import SchemePresentation

CURVES = {
    "line": (("x",), []),
    "parabola": (("x", "y"), ["y - x^2"]),
    "node": (("x", "y"), ["x*y"]),
    "cusp": (("x", "y"), ["y^2 - x^3"]),
    "double point": (("x",), ["x^2"]),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args()
    system = make_point_system("lsystem")
    for name, (variables, gens) in CURVES.items():
        X = SchemePresentation.from_strings(FieldSpec(), variables, gens, name)
        d = X.dim()
        row = [defect(X, system.member(n), d) for n in range(1, args.levels + 1)]
        print(f"{name:>13} (dim {d}): " + " ".join(map(str, row)))


if __name__ == "__main__":
    main()
