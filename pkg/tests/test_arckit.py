import random

import pytest
import sympy
from hypothesis import given, strategies as st

from schemic.arckit import (DIMENSION_CONSISTENT, TRIVIAL_PRODUCT, arc_variable, auto_arc,
                            classify_simple, defect, image_closure, make_point_system, pull_back,
                            stability_probe, stabilized_trace, truncation_map, weil_restrict)
from schemic.errors import DimensionMismatch, FieldMismatch
from schemic.exactalg import FieldSpec, Ring, format_polynomial, rename
from schemic.idealkit import Ideal, ideal_equal
from schemic.schemekit import SchemePresentation, jet_at_point

from conftest import QQ, fatpoint, random_polynomial, scheme

LSYS = make_point_system("lsystem")


def sympy_jet_equations(f, variables, n):
    """Coefficients of t^0..t^(n-1) in f(sum_j a{i}_j t^j), computed by sympy."""
    t = sympy.Symbol("t")
    subs = {sympy.Symbol(v): sum(sympy.Symbol(arc_variable(i + 1, j)) * t ** j for j in range(n))
            for i, v in enumerate(variables)}
    expr = sympy.expand(sympy.sympify(format_polynomial(f).replace("^", "**")).subs(subs, simultaneous=True))
    poly = sympy.Poly(expr, t)
    return [poly.coeff_monomial(t ** k) for k in range(n)]


@pytest.mark.parametrize("seed", range(10))
def test_weil_restriction_along_l_n_matches_truncated_substitution(seed):
    rng = random.Random(seed)
    S = Ring(QQ, ("x", "y")[: rng.randint(1, 2)])
    f = random_polynomial(rng, S, max_deg=3, max_terms=3)
    if not f:
        return
    n = rng.randint(1, 4)
    X = SchemePresentation(S, Ideal(S, [f]), "X")
    arc = weil_restrict(X, LSYS.member(n))
    expected = [e for e in sympy_jet_equations(f, S.variables, n) if e != 0]
    ring = arc.ring
    oracle = Ideal(ring, [ring(str(sympy.expand(e)).replace("**", "^")) for e in expected])
    assert ideal_equal(arc.ideal, oracle)


def test_auto_arc_of_square_zero_plane_point():
    m = fatpoint(("x", "y"), ["x^2", "x*y", "y^2"])
    arc = auto_arc(m)
    a1, b1, c1, a2, b2, c2 = "a1_0", "a1_2", "a1_1", "a2_0", "a2_2", "a2_1"
    gens = [f"{a1}*{a2}", f"{a1}*{b2} + {a2}*{b1}", f"{a1}*{c2} + {a2}*{c1}", f"{a1}^2",
            f"{a1}*{b1}", f"{a1}*{c1}", f"{a2}^2", f"{a2}*{b2}", f"{a2}*{c2}"]
    assert ideal_equal(arc.ideal, Ideal(arc.ring, gens))
    assert arc.dim() == 4


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        weil_restrict(scheme(("x",), ["x"]), fatpoint(("t",), ["t^2"], fld=FieldSpec.prime(3)))


def test_weil_restriction_along_a_point_is_identity():
    X = scheme(("x", "y"), ["y^2 - x^3"])
    arc = weil_restrict(X, LSYS.member(1))
    back = rename(arc.ideal.generators[0], X.ring, {"a1_0": "x", "a2_0": "y"})
    assert ideal_equal(Ideal(X.ring, [back]), X.ideal)


def test_truncation_is_coordinate_projection_for_lsystem():
    X = scheme(("x",), ["x^2"])
    T = truncation_map(X, LSYS, 3, 2)
    assert T.is_coordinate_projection
    assert pull_back(T, T.target.ring.var("a1_1")) == T.source.ring.var("a1_1")
    # x(t)^2 = 0 mod t^3 gives a1_0^2, a1_0*a1_1 and a1_1^2 + 2*a1_0*a1_2; eliminating a1_2 leaves a1_1^3
    closure = image_closure(T)
    assert ideal_equal(closure, Ideal(T.target.ring, ["a1_0^2", "a1_0*a1_1", "a1_1^3"]))


def test_noncoordinate_truncation():
    # jets of V(x + y + x^2): the small basis is not a subset-projection of the large one
    X = scheme(("x", "y"), ["x + y + x^2"])
    jets = make_point_system("jets", QQ, X)
    T = truncation_map(SchemePresentation.affine_space(1, stem="u"), jets, 3, 2)
    assert not T.is_coordinate_projection
    assert ideal_equal(image_closure(T), Ideal(T.target.ring, []))


def test_stabilized_trace_of_cusp():
    cusp = scheme(("x", "y"), ["y^2 - x^3"])
    tr = stabilized_trace(cusp, LSYS, 1, 5)
    assert tr.stabilized and tr.probe_depth == 3
    assert ideal_equal(tr.ideal, Ideal(tr.ideal.ring, ["a2_0^2 - a1_0^3"]))
    # at level 2 the images from depths 3 and 4 differ
    tr2 = stabilized_trace(cusp, LSYS, 2, 4)
    assert not tr2.stabilized and tr2.ideal.ring.ngens == 4


def test_defect():
    A2 = SchemePresentation.affine_space(2)
    for n in range(1, 4):
        assert defect(A2, LSYS.member(n), 2) == 0
    node = scheme(("x", "y"), ["x*y"])
    assert defect(node, LSYS.member(2), 1) == 0
    double = scheme(("x",), ["x^2"])
    assert [defect(double, LSYS.member(n), 0) for n in (1, 2, 3, 4)] == [0, 1, 1, 2]
    with pytest.raises(DimensionMismatch):
        defect(node, LSYS.member(2), 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_l_n_is_simple(n):
    v = classify_simple(LSYS.member(n))
    assert v.kind == "Simple" and v.m == n - 1


def test_point_is_simple():
    v = classify_simple(fatpoint((), []))
    assert v.kind == "Simple" and v.m == 0


def test_cusp_jet_is_not_simple():
    v = classify_simple(jet_at_point(scheme(("x", "y"), ["y^2 - x^3"]), (0, 0), 4))
    assert v.kind in ("NotSimple", "Inconclusive") and v.witness


def test_stability_probe():
    rep = stability_probe(SchemePresentation.affine_space(2), LSYS, 3)
    assert rep.defects == [0, 0, 0]
    assert set(rep.evidence) == {TRIVIAL_PRODUCT}
    node = stability_probe(scheme(("x", "y"), ["x*y"]), LSYS, 3)
    assert set(node.evidence) == {DIMENSION_CONSISTENT}


@given(st.integers(1, 4), st.integers(1, 3))
def test_affine_space_arcs_are_affine(n, d):
    arc = weil_restrict(SchemePresentation.affine_space(d), LSYS.member(n))
    assert arc.ideal.is_zero() and arc.ring.ngens == d * n
