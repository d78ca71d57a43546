"""A syntactic fragment of the Grothendieck ring of schemes, localized at L.

A class is a finite integer combination of atoms times powers of ``L = [A^1]``.
Atoms are canonical presentations with every free coordinate split off as a
power of ``L``, or constructible cones ``Cone(Z, F)`` with ``F`` a closed
subscheme of ``Z``.  Equality is equality of normal forms; no other
cut-and-paste relation is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, Iterable, Optional, Tuple

from .arckit import stabilized_trace, weil_restrict
from .errors import ContainmentViolated, TraceNotStabilized, UncertifiedReduction
from .exactalg import FieldSpec, Polynomial, Ring, format_polynomial, rename
from .idealkit import (Ideal, eliminate_linear_variables, ideal_contains, krull_dim,
                       radical_member)
from .schemekit import SchemePresentation, reduce_scheme, scheme_product

NEG_INF = -math.inf


def _used_variables(gens: Iterable[Polynomial], n: int) -> Tuple[int, ...]:
    used = set()
    for g in gens:
        used.update(g.support())
    return tuple(i for i in range(n) if i in used)


def _positional(ring: Ring, used: Tuple[int, ...]) -> Tuple[Ring, Dict[str, str]]:
    names = {ring.variables[i]: f"v{k}" for k, i in enumerate(used)}
    return Ring(ring.field, tuple(names[ring.variables[i]] for i in used)), names


def _key(gens: Iterable[Polynomial]) -> Tuple[str, ...]:
    return tuple(sorted(format_polynomial(g) for g in gens))


@dataclass(frozen=True)
class ClassAtom:
    """Canonical atom; compares by ``(kind, field, nvars, key)`` only.

    ``kind`` is ``"unit"`` (the class of ``Spec k``), ``"plain"`` or ``"cone"``.
    For cones ``key`` holds the ambient generators followed by ``("|",)`` and
    the subscheme generators.
    """

    kind: str
    field: FieldSpec
    nvars: int
    key: Tuple[str, ...]
    ambient: Optional[SchemePresentation] = dataclass_field(default=None, compare=False, repr=False)
    sub: Optional[SchemePresentation] = dataclass_field(default=None, compare=False, repr=False)

    @classmethod
    def unit(cls, fld: FieldSpec) -> "ClassAtom":
        return cls("unit", fld, 0, (), SchemePresentation.point(fld))

    def dim(self) -> int:
        if self.kind == "unit":
            return 0
        target = self.sub if self.kind == "cone" else self.ambient
        return _atom_dim(target)

    def __str__(self):
        if self.kind == "unit":
            return "1"
        gens = ", ".join(self.key)
        if self.kind == "plain":
            return f"[k[{self.nvars}]/({gens})]"
        sep = self.key.index("|")
        return (f"[cone(k[{self.nvars}]/({', '.join(self.key[:sep])}); "
                f"{', '.join(self.key[sep + 1:])})]")


_DIM_CACHE: Dict[Tuple, int] = {}


def _atom_dim(P: SchemePresentation) -> int:
    k = (P.field, P.ring.ngens, _key(P.ideal.groebner().basis))
    if k not in _DIM_CACHE:
        _DIM_CACHE[k] = krull_dim(P.ideal)
    return _DIM_CACHE[k]


@dataclass(eq=False)
class MotivicClass:
    """``sum coeff * atom * L^exp`` stored as ``{(atom, exp): coeff}``."""

    field: FieldSpec
    terms: Dict[Tuple[ClassAtom, int], int]
    provenance: str = ""

    @classmethod
    def zero(cls, fld: FieldSpec = FieldSpec()) -> "MotivicClass":
        return cls(fld, {})

    @classmethod
    def L_power(cls, e: int, fld: FieldSpec = FieldSpec(), coeff: int = 1) -> "MotivicClass":
        return cls.from_atom(ClassAtom.unit(fld), e, coeff)

    @classmethod
    def one(cls, fld: FieldSpec = FieldSpec()) -> "MotivicClass":
        return cls.L_power(0, fld)

    @classmethod
    def from_atom(cls, atom: Optional[ClassAtom], e: int, coeff: int = 1) -> "MotivicClass":
        if atom is None or not coeff:
            return cls(atom.field if atom else FieldSpec(), {})
        return cls(atom.field, {(atom, e): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, MotivicClass):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        return class_combine("add", self, other)

    def __sub__(self, other):
        return class_combine("sub", self, other)

    def __mul__(self, other):
        return class_combine("mul", self, other)

    def __neg__(self):
        return MotivicClass(self.field, {k: -c for k, c in self.terms.items()}, self.provenance)

    def scale_L(self, e: int) -> "MotivicClass":
        return class_combine("scaleL", self, e)

    def sorted_terms(self):
        """Terms in a fixed order: by L exponent descending, then atom text."""
        return sorted(self.terms.items(), key=lambda kv: (-kv[0][1], kv[0][0].kind != "unit",
                                                          str(kv[0][0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (atom, e), c in self.sorted_terms():
            if e == 0:
                lpart = ""
            elif e == 1:
                lpart = "L"
            else:
                lpart = f"L^{e}" if e > 0 else f"L^({e})"
            if atom.kind == "unit":
                body = lpart or "1"
            else:
                body = str(atom) + (f"*{lpart}" if lpart else "")
            mag = abs(c)
            text = body if mag == 1 else f"{mag}*{body}"
            if not parts:
                parts.append(text if c > 0 else f"-{text}")
            else:
                parts.append(f"+ {text}" if c > 0 else f"- {text}")
        return " ".join(parts)

    def __repr__(self):
        return f"MotivicClass({self})"


def _add_terms(out: Dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


# ---------------------------------------------------------------------------
# canonical atoms


def canonical_atom(X: SchemePresentation) -> Tuple[Optional[ClassAtom], int]:
    """``(atom, e)`` with ``[X] = [atom] * L^e``; ``atom`` is None for the empty scheme."""
    fld = X.field
    if X.ideal.is_unit():
        return None, 0
    core, solved = eliminate_linear_variables(X.ideal)
    gens = list(core.groebner().basis)
    used = _used_variables(gens, core.ring.ngens)
    free = core.ring.ngens - len(used)
    if not used:
        return ClassAtom.unit(fld), free
    ring, names = _positional(core.ring, used)
    canon = [rename(g, ring, names) for g in gens]
    P = SchemePresentation(ring, Ideal(ring, canon), X.label)
    return ClassAtom("plain", fld, ring.ngens, _key(P.ideal.groebner().basis), P), free


def class_of_scheme(X: SchemePresentation) -> MotivicClass:
    atom, e = canonical_atom(X)
    cls = MotivicClass.from_atom(atom, e)
    cls.field = X.field
    cls.provenance = f"class of {X.label}"
    return cls


def cone_class(Z: SchemePresentation, F: SchemePresentation) -> MotivicClass:
    """Class of the points of ``Z`` whose residue specialization lies on ``F``.

    ``F`` may live in a ring with the same variable names as ``Z``; a
    coordinate-free nonempty ``F`` (``Spec k``) is read as the origin of ``Z``.
    """
    if F.ring.ngens == 0 and not F.is_empty() and Z.ring.ngens:
        F = SchemePresentation(Z.ring, Ideal(Z.ring, Z.ring.gens()), F.label)
    elif F.ring != Z.ring:
        F = SchemePresentation(Z.ring, Ideal(Z.ring, [rename(g, Z.ring) for g in F.generators]),
                               F.label)
    if not ideal_contains(F.ideal, Z.ideal):
        raise ContainmentViolated(f"{F.label} is not a closed subscheme of {Z.label}")
    if F.ideal.is_unit():
        return MotivicClass.zero(Z.field)
    if all(radical_member(g, Z.ideal) for g in F.ideal.groebner().basis):
        # F and Z have the same points: the cone is all of Z
        return class_of_scheme(Z)
    zg = list(Z.ideal.groebner().basis)
    fg = list(F.ideal.groebner().basis)
    used = _used_variables(zg + fg, Z.ring.ngens)
    free = Z.ring.ngens - len(used)
    ring, names = _positional(Z.ring, used)
    zc = SchemePresentation(ring, Ideal(ring, [rename(g, ring, names) for g in zg]), Z.label)
    fc = SchemePresentation(ring, Ideal(ring, [rename(g, ring, names) for g in fg]), F.label)
    key = _key(zc.ideal.groebner().basis) + ("|",) + _key(fc.ideal.groebner().basis)
    atom = ClassAtom("cone", Z.field, ring.ngens, key, zc, fc)
    cls = MotivicClass.from_atom(atom, free)
    cls.provenance = f"cone of {F.label} in {Z.label}"
    return cls


def _atom_product(a: ClassAtom, b: ClassAtom) -> MotivicClass:
    if a.kind == "unit":
        return MotivicClass.from_atom(b, 0)
    if b.kind == "unit":
        return MotivicClass.from_atom(a, 0)
    if a.kind == "plain" and b.kind == "plain":
        return class_of_scheme(scheme_product(a.ambient, b.ambient))
    za, fa = a.ambient, a.sub if a.kind == "cone" else a.ambient
    zb, fb = b.ambient, b.sub if b.kind == "cone" else b.ambient
    Z = scheme_product(za, zb)
    F = scheme_product(fa, fb)
    return cone_class(Z, F)


def class_combine(op: str, A: MotivicClass, B) -> MotivicClass:
    """``op`` in ``add``, ``sub``, ``mul``; ``scaleL`` multiplies ``A`` by ``L^B``."""
    if op == "scaleL":
        return MotivicClass(A.field, {(atom, e + B): c for (atom, e), c in A.terms.items()},
                            A.provenance)
    out: Dict = {}
    if op in ("add", "sub"):
        sign = 1 if op == "add" else -1
        for k, c in A.terms.items():
            _add_terms(out, k, c)
        for k, c in B.terms.items():
            _add_terms(out, k, sign * c)
        return MotivicClass(A.field if A.terms else B.field, out)
    if op != "mul":
        raise ValueError(f"unknown class operation {op!r}")
    for (a, ea), ca in A.terms.items():
        for (b, eb), cb in B.terms.items():
            prod = _atom_product(a, b)
            for (atom, e), c in prod.terms.items():
                _add_terms(out, (atom, e + ea + eb), c * ca * cb)
    return MotivicClass(A.field, out)


def class_dim(A: MotivicClass):
    """``max(dim atom + exp)`` over the normal form; ``-inf`` for zero."""
    if not A.terms:
        return NEG_INF
    return max(atom.dim() + e for (atom, e) in A.terms)


def filtration_member(A: MotivicClass, m: int) -> bool:
    return class_dim(A) < m


def _reduced_class(P: SchemePresentation) -> MotivicClass:
    red = reduce_scheme(P)
    if not red.certified:
        raise UncertifiedReduction(f"reduction of {P.label} is not certified")
    return class_of_scheme(red.reduced)


def sigma_reduce(A: MotivicClass) -> MotivicClass:
    """Send each atom to the class of its reduced point locus; ``L`` is fixed."""
    out = MotivicClass.zero(A.field)
    for (atom, e), c in A.sorted_terms():
        if atom.kind == "unit":
            image = MotivicClass.one(A.field)
        elif atom.kind == "plain":
            image = _reduced_class(atom.ambient)
        else:
            image = _reduced_class(atom.sub)
        out = out + MotivicClass(image.field, {(a, x + e): y * c for (a, x), y in image.terms.items()})
    out.provenance = "sigma" + (f" of {A.provenance}" if A.provenance else "")
    return out


# ---------------------------------------------------------------------------
# measures at a finite level


def _level_of_length(system, s: int) -> int:
    n = 1
    while True:
        ell = system.member(n).length
        if ell == s:
            return n
        if ell > s:
            raise ValueError(f"no member of the system has length {s}")
        n += 1


def measure_stable(X: SchemePresentation, system, s: int, d: int,
                   max_depth: Optional[int] = None) -> MotivicClass:
    """``[trace at the level of length s] * L^(-s*d)`` at an asserted stable level."""
    n = _level_of_length(system, s)
    trace = stabilized_trace(X, system, n, max_depth or n + 3)
    if not trace.stabilized:
        raise TraceNotStabilized(n)
    P = SchemePresentation(trace.ideal.ring, trace.ideal, f"trace_{n}({X.label})")
    out = class_of_scheme(P).scale_L(-s * d)
    out.provenance = f"asserted stable level s={s}"
    return out


def measure_rational_lax(X: SchemePresentation, system, n: int, d: int, l_value: int,
                         max_depth: Optional[int] = None) -> MotivicClass:
    """``[cone of the reduced trace in nabla_n X] * L^(-d*len - l)``."""
    trace = stabilized_trace(X, system, n, max_depth or n + 3)
    if not trace.stabilized:
        raise TraceNotStabilized(n)
    arcs = weil_restrict(X, system.member(n))
    red = reduce_scheme(arcs.presentation.with_ideal(trace.ideal, f"trace_{n}({X.label})"))
    if not red.certified:
        raise UncertifiedReduction(f"reduction of the level-{n} trace is not certified")
    out = cone_class(arcs.presentation, red.reduced)
    out = out.scale_L(-d * system.member(n).length - l_value)
    out.provenance = f"rational lax measure at level {n}, l={l_value}"
    return out
