"""Lengths and simplicity verdicts of the jets J^n of the plane cusp at the origin."""

import argparse
import time

from schemic.arckit import classify_simple
from schemic.exactalg import FieldSpec
from schemic.schemekit import SchemePresentation, jet_at_point


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=4)
    ap.add_argument("--char", type=int, default=0)
    args = ap.parse_args()
    fld = FieldSpec.prime(args.char) if args.char else FieldSpec()
    cusp = SchemePresentation.from_strings(fld, ("x", "y"), ["y^2 - x^3"], "C")
    for n in range(1, args.max_order + 1):
        start = time.perf_counter()
        jet = jet_at_point(cusp, (0, 0), n)
        verdict = classify_simple(jet)
        print(f"J^{n}: length {jet.length}, {verdict} [{time.perf_counter() - start:.2f}s]")


if __name__ == "__main__":
    main()
