"""Affine schemes and fat points given by presentations ``k[x]/I``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from .errors import (FieldMismatch, NotArtinian, NotEquidimensionalAssertionFailed,
                     NotLocal, PointNotOnScheme, ResidueNotGroundField)
from .exactalg import (GREVLEX, FieldSpec, Monomial, Polynomial, Ring, rename,
                       substitute)
from .idealkit import (Ideal, krull_dim, minimal_polynomial, normal_form,
                       radical_closure, standard_monomials, zero_dim_radical)


@dataclass(eq=False)
class SchemePresentation:
    """``Spec ring/ideal`` with a display label."""

    ring: Ring
    ideal: Ideal
    label: str = "X"

    @classmethod
    def from_strings(cls, field_spec: FieldSpec, variables: Sequence[str],
                     generators: Sequence[str], label: str = "X") -> "SchemePresentation":
        ring = Ring(field_spec, tuple(variables))
        return cls(ring, Ideal(ring, [ring.parse(g) for g in generators]), label)

    @classmethod
    def affine_space(cls, n: int, field_spec: FieldSpec = FieldSpec(), stem: str = "x",
                     label: Optional[str] = None) -> "SchemePresentation":
        ring = Ring(field_spec, tuple(f"{stem}{i + 1}" for i in range(n)))
        return cls(ring, Ideal(ring), label or f"A^{n}")

    @classmethod
    def point(cls, field_spec: FieldSpec = FieldSpec()) -> "SchemePresentation":
        ring = Ring(field_spec, ())
        return cls(ring, Ideal(ring), "Spec k")

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    @property
    def generators(self) -> Tuple[Polynomial, ...]:
        return self.ideal.generators

    def dim(self) -> int:
        return krull_dim(self.ideal)

    def is_empty(self) -> bool:
        return self.ideal.is_unit()

    def with_ideal(self, ideal: Ideal, label: Optional[str] = None) -> "SchemePresentation":
        return SchemePresentation(self.ring, ideal, label or self.label)

    def __str__(self):
        gens = ", ".join(str(g) for g in self.ideal.groebner().basis)
        return f"{self.field.name}[{', '.join(self.ring.variables)}]/({gens})"


@dataclass(eq=False)
class FatPoint:
    """A local artinian algebra with residue field k, with its monomial basis.

    ``table[i][j]`` lists the ``(k, c)`` pairs with ``e_i * e_j = sum c*e_k``.
    """

    presentation: SchemePresentation
    basis: Tuple[Monomial, ...]
    table: Tuple[Tuple[Tuple[Tuple[int, object], ...], ...], ...]
    point: Tuple = ()

    @property
    def length(self) -> int:
        return len(self.basis)

    @property
    def ring(self) -> Ring:
        return self.presentation.ring

    @property
    def field(self) -> FieldSpec:
        return self.presentation.field

    @property
    def label(self) -> str:
        return self.presentation.label

    def basis_names(self) -> List[str]:
        return [str(self.ring.monomial(m)) for m in self.basis]

    def multiply(self, u: Sequence, v: Sequence) -> List:
        """Product of two elements given as coefficient vectors over the basis.

        Entries may be field elements or polynomials over any ring with the
        same field; missing products are skipped rather than multiplied by 0.
        """
        out = [None] * self.length
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.table[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in row[j]:
                    term = ab * c
                    out[k] = term if out[k] is None else out[k] + term
        return out

    def __str__(self):
        return f"{self.label} = {self.presentation} (length {self.length})"


def _coeff_vector(f: Polynomial, index: Dict[Monomial, int]):
    return tuple(sorted((index[m], c) for m, c in f.terms.items()))


def _rational_points(ideal: Ideal) -> List[Tuple]:
    """All k-rational points of a zero-dimensional ideal."""
    fld = ideal.ring.field
    t = sympy.Symbol("t")
    root_lists = []
    for v in ideal.ring.variables:
        mp = minimal_polynomial(ideal.ring.var(v), ideal)
        if fld.p:
            poly = sympy.Poly([int(c) for c in reversed(mp)], t, modulus=fld.p)
        else:
            poly = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator))
                               for c in reversed(mp)], t, domain="QQ")
        roots = [sympy.Rational(r) for r in poly.ground_roots()]
        root_lists.append([fld.coerce(f"{r.p}/{r.q}") for r in roots])
    points = []
    for combo in itertools.product(*root_lists):
        pt = dict(zip(ideal.ring.variables, combo))
        if all(not g.evaluate(pt) for g in ideal.generators):
            points.append(combo)
    return points


def make_fatpoint(P: SchemePresentation) -> FatPoint:
    """Validate ``P`` as a fat point and build its basis and multiplication table."""
    I = P.ideal
    if I.is_unit():
        raise NotLocal(f"{P.label} is empty")
    if krull_dim(I) > 0:
        raise NotArtinian(f"{P.label} has positive dimension")
    rad = zero_dim_radical(I)
    gens = rad.groebner().basis
    n = P.ring.ngens
    if not (len(gens) == n and all(g.total_degree() == 1 for g in gens)):
        if _rational_points(rad):
            raise NotLocal(f"{P.label} has more than one point")
        raise ResidueNotGroundField(f"{P.label} has no point with residue field {P.field.name}")
    # rad = (x_i - c_i), so the normal form of x_i is the constant c_i
    point = tuple(normal_form(P.ring.var(v), rad.groebner()).coefficient((0,) * n)
                  for v in P.ring.variables)
    basis = tuple(standard_monomials(I, GREVLEX))
    index = {m: k for k, m in enumerate(basis)}
    G = I.groebner()
    table = []
    for i, a in enumerate(basis):
        row = []
        for j, b in enumerate(basis):
            prod = P.ring.monomial(tuple(x + y for x, y in zip(a, b)))
            row.append(_coeff_vector(normal_form(prod, G), index))
        table.append(tuple(row))
    fp = FatPoint(P, basis, tuple(table), point)
    _check_table(fp)
    return fp


def _check_table(fp: FatPoint):
    L = fp.length
    if any(fp.basis[0]):
        raise AssertionError("first basis element must be 1")
    one = fp.field.coerce(1)
    for i in range(L):
        for j in range(L):
            if fp.table[i][j] != fp.table[j][i]:
                raise AssertionError(f"table not symmetric at ({i}, {j})")
    for i, j, k in itertools.product(range(L), repeat=3):
        ei = [0] * L
        ei[i] = one
        ej = [0] * L
        ej[j] = one
        ek = [0] * L
        ek[k] = one
        left = fp.multiply(fp.multiply(ei, ej), ek)
        right = fp.multiply(ei, fp.multiply(ej, ek))
        norm = fp.field.coerce
        if [norm(x or 0) for x in left] != [norm(x or 0) for x in right]:
            raise AssertionError(f"table not associative at ({i}, {j}, {k})")


def _as_point(X: SchemePresentation, o) -> Dict[str, object]:
    if isinstance(o, Mapping):
        pt = {v: X.field.coerce(o.get(v, 0)) for v in X.ring.variables}
    else:
        o = list(o)
        if len(o) != X.ring.ngens:
            raise ValueError(f"point needs {X.ring.ngens} coordinates")
        pt = {v: X.field.coerce(c) for v, c in zip(X.ring.variables, o)}
    return pt


def power_of_maximal_ideal(ring: Ring, n: int) -> List[Polynomial]:
    """Generators of ``(x_1, ..., x_g)^n``: all monomials of degree ``n``."""
    g = ring.ngens
    out = []
    for combo in itertools.combinations_with_replacement(range(g), n):
        e = [0] * g
        for i in combo:
            e[i] += 1
        out.append(ring.monomial(tuple(e)))
    return out


def jet_at_point(X: SchemePresentation, o, n: int) -> FatPoint:
    """``Spec A/M_o^n`` with the point ``o`` translated to the origin."""
    if n < 1:
        raise ValueError("jet order must be positive")
    pt = _as_point(X, o)
    for g in X.generators:
        if g.evaluate(pt):
            raise PointNotOnScheme(f"{g} does not vanish at {pt}")
    ring = X.ring
    shift = {v: ring.var(v) + ring.const(c) for v, c in pt.items()}
    translated = [substitute(g, shift, ring) if ring.ngens else g for g in X.generators]
    gens = translated + power_of_maximal_ideal(ring, n)
    label = f"J^{n}({X.label})"
    return make_fatpoint(SchemePresentation(ring, Ideal(ring, gens), label))


def _disjoint_names(taken: Sequence[str], names: Sequence[str]) -> Dict[str, str]:
    used = set(taken)
    out = {}
    for v in names:
        new, k = v, 1
        while new in used:
            k += 1
            new = f"{v}_{k}"
        used.add(new)
        out[v] = new
    return out


def scheme_product(X: SchemePresentation, Y: SchemePresentation,
                   label: Optional[str] = None) -> SchemePresentation:
    """``X x_k Y``; clashing variables of ``Y`` get a ``_k`` suffix."""
    if X.field != Y.field:
        raise FieldMismatch(f"{X.field.name} vs {Y.field.name}")
    names = _disjoint_names(X.ring.variables, Y.ring.variables)
    ring = Ring(X.field, X.ring.variables + tuple(names[v] for v in Y.ring.variables))
    gens = [rename(g, ring) for g in X.generators]
    gens += [rename(g, ring, names) for g in Y.generators]
    return SchemePresentation(ring, Ideal(ring, gens), label or f"{X.label} x {Y.label}")


def fatpoint_product(m: FatPoint, n: FatPoint) -> FatPoint:
    return make_fatpoint(scheme_product(m.presentation, n.presentation))


@dataclass(eq=False)
class ReductionResult:
    reduced: SchemePresentation
    certified: bool


def reduce_scheme(X: SchemePresentation) -> ReductionResult:
    J, certified = radical_closure(X.ideal)
    return ReductionResult(X.with_ideal(J, f"{X.label}^red"), certified)


def _det(rows: List[List[Polynomial]], ring: Ring) -> Polynomial:
    n = len(rows)
    if n == 0:
        return ring.one()
    if n == 1:
        return rows[0][0]
    total = ring.zero()
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _det(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def jacobian_minors(gens: Sequence[Polynomial], ring: Ring, c: int) -> List[Polynomial]:
    jac = [[g.derivative(v) for v in ring.variables] for g in gens]
    out = []
    for rows in itertools.combinations(range(len(gens)), c):
        for cols in itertools.combinations(range(ring.ngens), c):
            d = _det([[jac[r][k] for k in cols] for r in rows], ring)
            if d:
                out.append(d)
    return out


def singular_locus(X: SchemePresentation, d: Optional[int] = None) -> Ideal:
    """Ideal of ``X`` plus the codimension-size Jacobian minors."""
    dim = X.dim()
    if d is not None and d != dim:
        raise NotEquidimensionalAssertionFailed(f"asserted dim {d}, computed {dim}")
    if dim < 0:
        return Ideal.unit(X.ring)
    c = X.ring.ngens - dim
    gens = list(X.ideal.groebner().basis)
    return X.ideal + jacobian_minors(gens, X.ring, c)
