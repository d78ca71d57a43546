"""Arc spaces over fat points by Weil restriction, and what can be read off them.

A fat point ``n`` with basis ``e_0 = 1, ..., e_{l-1}`` turns a scheme ``X`` in
variables ``x_1..x_g`` into the scheme of ``n``-valued points of ``X``: write
``x_i = sum_j a{i}_{j} e_j``, expand every generator in the fat-point algebra
and keep each basis coefficient as an equation.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from math import comb
from typing import Dict, List, Optional, Tuple

from .errors import (BasisNotNested, ContainmentViolated, DimensionMismatch,
                     FieldMismatch)
from .exactalg import FieldSpec, Polynomial, Ring, rename, substitute
from .idealkit import (Ideal, eliminate, eliminate_linear_variables, ideal_contains,
                       ideal_equal, ideal_member, krull_dim, normal_form,
                       radical_member, saturate)
from .schemekit import (FatPoint, SchemePresentation, jacobian_minors, jet_at_point,
                        make_fatpoint, reduce_scheme)


def arc_variable(i: int, j: int) -> str:
    """Name of the coordinate of base variable ``i`` (1-based) along ``e_j``."""
    return f"a{i}_{j}"


@dataclass(eq=False)
class ArcSpace:
    presentation: SchemePresentation
    base: SchemePresentation
    point: FatPoint

    @property
    def ring(self) -> Ring:
        return self.presentation.ring

    @property
    def ideal(self) -> Ideal:
        return self.presentation.ideal

    def dim(self) -> int:
        return krull_dim(self.ideal)

    def coordinates(self, i: int) -> List[Polynomial]:
        return [self.ring.var(arc_variable(i, j)) for j in range(self.point.length)]


def _expand(f: Polynomial, vectors: List[List[Polynomial]], fp: FatPoint, ring: Ring):
    """Coefficient vector of ``f(sum_j a_{i,j} e_j)`` in the fat-point algebra."""
    L = fp.length
    one = [ring.one()] + [None] * (L - 1)
    powers: Dict[Tuple[int, int], List] = {}

    def power(i, e):
        if e == 0:
            return one
        if (i, e) not in powers:
            powers[(i, e)] = fp.multiply(power(i, e - 1), vectors[i])
        return powers[(i, e)]

    total: List[Dict] = [dict() for _ in range(L)]
    for m, c in f.terms.items():
        vec = one
        for i, e in enumerate(m):
            if e:
                vec = fp.multiply(vec, power(i, e))
        for k, entry in enumerate(vec):
            if entry:
                total[k] = (Polynomial(ring, total[k]) + entry.scale(c)).terms
    return [Polynomial(ring, t) for t in total]


def weil_restrict(X: SchemePresentation, n: FatPoint) -> ArcSpace:
    if X.field != n.field:
        raise FieldMismatch(f"{X.field.name} vs {n.field.name}")
    g, L = X.ring.ngens, n.length
    ring = Ring(X.field, tuple(arc_variable(i + 1, j) for i in range(g) for j in range(L)))
    vectors = [[ring.var(arc_variable(i + 1, j)) for j in range(L)] for i in range(g)]
    equations = []
    for f in X.generators:
        equations.extend(e for e in _expand(f, vectors, n, ring) if e)
    label = f"nabla_{n.label}({X.label})"
    return ArcSpace(SchemePresentation(ring, Ideal(ring, equations), label), X, n)


def auto_arc(n: FatPoint) -> ArcSpace:
    return weil_restrict(n.presentation, n)


# ---------------------------------------------------------------------------
# directed systems of fat points


@dataclass(eq=False)
class PointSystem:
    """``member(n)`` is ``k[t]/(t^n)`` for ``lsystem``, ``J^n_o Y`` for ``jets``."""

    kind: str
    field: FieldSpec = FieldSpec()
    scheme: Optional[SchemePresentation] = None
    origin: Optional[Tuple] = None
    _members: Dict[int, FatPoint] = dataclass_field(default_factory=dict, repr=False)

    def member(self, n: int) -> FatPoint:
        if n < 1:
            raise ValueError("system levels start at 1")
        if n not in self._members:
            if self.kind == "lsystem":
                ring = Ring(self.field, ("t",))
                P = SchemePresentation(ring, Ideal(ring, [ring.var("t") ** n]), f"l_{n}")
                fp = make_fatpoint(P)
            else:
                fp = jet_at_point(self.scheme, self.origin, n)
            prev = self._members.get(n - 1)
            if prev is not None and not ideal_contains(prev.presentation.ideal, fp.presentation.ideal):
                raise ContainmentViolated(f"level {n} does not contain level {n - 1}")
            self._members[n] = fp
        return self._members[n]

    def __str__(self):
        if self.kind == "lsystem":
            return "lsystem"
        return f"jets({self.scheme.label}, {list(self.origin)})"


def make_point_system(kind: str, field: FieldSpec = FieldSpec(),
                      scheme: Optional[SchemePresentation] = None, origin=None) -> PointSystem:
    if kind == "lsystem":
        return PointSystem("lsystem", field)
    if kind != "jets":
        raise ValueError(f"unknown point system {kind!r}")
    if origin is None:
        origin = (0,) * scheme.ring.ngens
    system = PointSystem("jets", scheme.field, scheme, tuple(origin))
    system.member(1)  # validates the point
    return system


# ---------------------------------------------------------------------------
# truncation


@dataclass(eq=False)
class TruncationMap:
    """``projection[name]`` expresses a target coordinate in source coordinates."""

    source: ArcSpace
    target: ArcSpace
    projection: Dict[str, Polynomial]
    is_coordinate_projection: bool


def truncation_map(X: SchemePresentation, system: PointSystem, m: int, n: int) -> TruncationMap:
    if n > m:
        raise ValueError("truncation goes from a deeper level to a shallower one")
    big, small = system.member(m), system.member(n)
    if not set(small.basis) <= set(big.basis):
        raise BasisNotNested(f"level {n} basis is not inside level {m} basis")
    source, target = weil_restrict(X, big), weil_restrict(X, small)
    G = small.presentation.ideal.groebner()
    index = {mono: k for k, mono in enumerate(small.basis)}
    # images[j] = coefficients of e_j (of the big point) in the small basis
    images = []
    for mono in big.basis:
        nf = normal_form(small.ring.monomial(mono), G)
        images.append({index[t]: c for t, c in nf.terms.items()})
    coordinate = all(len(img) == 0 or (len(img) == 1 and big.basis[j] in index)
                     for j, img in enumerate(images))
    projection = {}
    for i in range(1, X.ring.ngens + 1):
        for k in range(small.length):
            expr = source.ring.zero()
            for j, img in enumerate(images):
                if k in img:
                    expr = expr + source.ring.var(arc_variable(i, j)).scale(img[k])
            projection[arc_variable(i, k)] = expr
    T = TruncationMap(source, target, projection, coordinate)
    for gen in target.ideal.generators:
        if not ideal_member(pull_back(T, gen), source.ideal):
            raise ContainmentViolated(f"{gen} does not pull back into the source ideal")
    return T


def pull_back(T: TruncationMap, f: Polynomial) -> Polynomial:
    if not T.projection:
        return T.source.ring.const(f.coefficient(()))
    return substitute(f, T.projection, T.source.ring)


def image_closure(T: TruncationMap) -> Ideal:
    """Ideal of the Zariski closure of the image of the truncation."""
    src, tgt = T.source.ring, T.target.ring
    if T.is_coordinate_projection:
        keep = {T.projection[v].support()[0]: v for v in tgt.variables if T.projection[v]}
        drop = [v for i, v in enumerate(src.variables) if i not in keep]
        closed = eliminate(T.source.ideal, drop)
        names = {src.variables[i]: v for i, v in keep.items()}
        gens = [rename(g, tgt, names) for g in closed.generators]
        # target coordinates hit by a zero projection vanish on the image
        gens += [tgt.var(v) for v in tgt.variables if not T.projection[v]]
        return Ideal(tgt, gens)
    fresh = {v: f"{v}_img" for v in tgt.variables}
    graph_ring = Ring(src.field, src.variables + tuple(fresh[v] for v in tgt.variables))
    gens = [rename(g, graph_ring) for g in T.source.ideal.generators]
    gens += [graph_ring.var(fresh[v]) - rename(T.projection[v], graph_ring)
             for v in tgt.variables]
    closed = eliminate(Ideal(graph_ring, gens), src.variables)
    back = {fresh[v]: v for v in tgt.variables}
    return Ideal(tgt, [rename(g, tgt, back) for g in closed.generators])


@dataclass(eq=False)
class StabilizedTrace:
    level: int
    ideal: Ideal
    stabilized: bool
    probe_depth: int


def stabilized_trace(X: SchemePresentation, system: PointSystem, n: int,
                     max_depth: int) -> StabilizedTrace:
    """Closure of the image of deeper levels in level ``n``, deepening until it repeats."""
    if n >= max_depth:
        raise ValueError(f"level {n} needs max_depth > {n}")
    previous = None
    for depth in range(n + 1, max_depth + 1):
        current = image_closure(truncation_map(X, system, depth, n))
        if previous is not None and ideal_equal(previous, current):
            return StabilizedTrace(n, current, True, depth)
        previous = current
    return StabilizedTrace(n, previous, False, max_depth)


def defect(X, n: FatPoint, d: int) -> int:
    """``dim(nabla_n X) - d * length(n)``; ``X`` may be a scheme or a fat point."""
    if isinstance(X, FatPoint):
        X = X.presentation
    actual = X.dim()
    if d != actual:
        raise DimensionMismatch(f"asserted dim {d}, computed {actual}")
    return weil_restrict(X, n).dim() - d * n.length


# ---------------------------------------------------------------------------
# simplicity


@dataclass(frozen=True)
class SimplicityVerdict:
    """``kind`` is ``Simple``, ``NotSimple`` or ``Inconclusive``."""

    kind: str
    m: Optional[int] = None
    witness: str = ""

    def __str__(self):
        if self.kind == "Simple":
            return f"Simple({self.m})"
        return f"{self.kind}({self.witness})"


_MINOR_BUDGET = 20000


def _rank(rows: List[Dict[int, object]], fld: FieldSpec) -> int:
    rows = [dict(r) for r in rows if r]
    rank = 0
    while rows:
        pivot = rows.pop()
        col, val = next(iter(pivot.items()))
        inv = fld.inv(val)
        rank += 1
        nxt = []
        for r in rows:
            c = r.get(col)
            if c:
                for k, v in pivot.items():
                    x = fld.coerce(r.get(k, 0) - c * inv * v)
                    if x:
                        r[k] = x
                    else:
                        r.pop(k, None)
            if r:
                nxt.append(r)
        rows = nxt
    return rank


def _tangent_dim_at_origin(I: Ideal) -> Optional[int]:
    """Zariski tangent dimension at 0, or None when 0 is not on ``V(I)``."""
    gens = I.groebner().basis
    n = I.ring.ngens
    zero = (0,) * n
    if any(g.coefficient(zero) for g in gens):
        return None
    rows = []
    for g in gens:
        rows.append({m.index(1): c for m, c in g.terms.items() if sum(m) == 1})
    return n - _rank(rows, I.ring.field)


def _support_ideal(I: Ideal) -> Ideal:
    """``I`` in the ring of the variables it actually uses; the rest split off as a factor."""
    used = sorted({i for g in I.groebner().basis for i in g.support()})
    sub = Ring(I.ring.field, tuple(I.ring.variables[i] for i in used))
    return Ideal(sub, [rename(g, sub) for g in I.groebner().basis])


def reducibility_witness(I: Ideal) -> Optional[Tuple[Polynomial, Polynomial]]:
    """``(f, g)`` with ``f*g`` in ``rad(I)`` but neither factor in it, if one is found.

    Such a pair shows that ``V(I)`` is reducible.  Candidates for ``f`` are the
    variables; ``g`` runs over the saturation ``I : f^infinity``.
    """
    for v in I.ring.variables:
        f = I.ring.var(v)
        if radical_member(f, I):
            continue
        for g in saturate(I, f).groebner().basis:
            if not radical_member(g, I):
                assert radical_member(f * g, I)
                return f, g
    return None


def classify_simple(n: FatPoint) -> SimplicityVerdict:
    """Decide whether the reduced auto-arc space of ``n`` is an affine space."""
    arcs = auto_arc(n)
    red = reduce_scheme(arcs.presentation)
    core, _ = eliminate_linear_variables(red.reduced.ideal)
    if not red.certified:
        # rad(core) is still the radical of the auto-arc ideal up to the same isomorphism
        pair = reducibility_witness(_support_ideal(core))
        if pair is not None:
            f, g = pair
            return SimplicityVerdict(
                "NotSimple", witness=f"reduced auto-arc space is reducible: ({f})*({g}) vanishes "
                                     f"on it while neither factor does")
        return SimplicityVerdict("Inconclusive", witness="radical of the auto-arc ideal not certified")
    if core.is_zero():
        return SimplicityVerdict("Simple", core.ring.ngens)
    if core.is_unit():
        return SimplicityVerdict("Inconclusive", witness="auto-arc space is empty")
    d = krull_dim(core)
    tangent = _tangent_dim_at_origin(core)
    if tangent is not None and tangent > d:
        return SimplicityVerdict(
            "NotSimple",
            witness=f"origin is singular: tangent dimension {tangent} > dimension {d}")
    c = core.ring.ngens - d
    gens = list(core.groebner().basis)
    if comb(len(gens), c) * comb(core.ring.ngens, c) > _MINOR_BUDGET:
        return SimplicityVerdict("Inconclusive", witness="Jacobian too large to test")
    sing = core + jacobian_minors(gens, core.ring, c)
    if not sing.is_unit():
        return SimplicityVerdict("NotSimple", witness=f"nonempty singular locus {sing}")
    return SimplicityVerdict("Inconclusive", witness="smooth but not shown to be an affine space")


# ---------------------------------------------------------------------------
# stability probe

TRIVIAL_PRODUCT = "verified-trivial-product"
DIMENSION_CONSISTENT = "dimension-consistent"
INCONSISTENT = "inconsistent"


@dataclass(eq=False)
class StabilityReport:
    levels: List[int]
    lengths: List[int]
    dims: List[int]
    defects: List[int]
    evidence: List[str]  # evidence[k] is for the step levels[k] -> levels[k+1]


def stability_probe(X: SchemePresentation, system: PointSystem, n_max: int) -> StabilityReport:
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    d = X.dim()
    levels = list(range(1, n_max + 1))
    arcs = [weil_restrict(X, system.member(n)) for n in levels]
    lengths = [a.point.length for a in arcs]
    dims = [a.dim() for a in arcs]
    defects = [dim - d * ell for dim, ell in zip(dims, lengths)]
    evidence = []
    for k in range(n_max - 1):
        T = truncation_map(X, system, levels[k + 1], levels[k])
        pulled = Ideal(T.source.ring, [pull_back(T, g) for g in T.target.ideal.generators])
        if T.is_coordinate_projection and ideal_equal(pulled, T.source.ideal):
            evidence.append(TRIVIAL_PRODUCT)
        elif dims[k + 1] - dims[k] == d * (lengths[k + 1] - lengths[k]):
            evidence.append(DIMENSION_CONSISTENT)
        else:
            evidence.append(INCONSISTENT)
    return StabilityReport(levels, lengths, dims, defects, evidence)
