"""Exact field arithmetic and sparse multivariate polynomials.

Polynomials are stored as ``{exponent tuple: coefficient}`` dictionaries with
no zero coefficients.  Coefficients are exact rationals (``gmpy2.mpq`` when
available, :class:`fractions.Fraction` otherwise) or canonical residues
``0 <= c < p`` for prime fields.
"""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .errors import MissingAssignment, RingMismatch

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _mpq

    def QQ(num, den=1):
        return _mpq(num, den)

    _RATIONAL_TYPES = (type(_mpq(1, 2)), Fraction)
except ImportError:  # pragma: no cover
    def QQ(num, den=1):
        return Fraction(num, den)

    _RATIONAL_TYPES = (Fraction,)

Monomial = Tuple[int, ...]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: rationals when ``p == 0``, otherwise GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def coerce(self, value):
        """Bring an int, Fraction, mpq or ``"a/b"`` string into the field."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.p == 0:
            if isinstance(value, int):
                return QQ(value)
            if isinstance(value, _RATIONAL_TYPES):
                return QQ(int(value.numerator), int(value.denominator))
            raise TypeError(f"cannot coerce {value!r} into QQ")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, _RATIONAL_TYPES):
            num, den = int(value.numerator), int(value.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return num * pow(den, -1, self.p) % self.p
        raise TypeError(f"cannot coerce {value!r} into GF({self.p})")

    def inv(self, a):
        if self.p:
            return pow(int(a), -1, self.p)
        return 1 / a

    def format(self, c) -> str:
        if self.p:
            return str(int(c))
        num, den = int(c.numerator), int(c.denominator)
        return str(num) if den == 1 else f"{num}/{den}"


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class MonomialOrder:
    """Lex, GrevLex or a two-block elimination order.

    ``front`` holds the variable indices of the first block of a block order;
    both blocks are compared by grevlex and the front block dominates.
    """

    kind: str = "grevlex"
    front: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "front", tuple(sorted(self.front)))

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def grevlex(cls):
        return cls("grevlex")

    @classmethod
    def block(cls, front: Iterable[int]):
        return cls("block", tuple(front))

    def key(self, m: Monomial) -> tuple:
        """Sort key: ``key(a) < key(b)`` iff ``a < b`` in this order."""
        if self.kind == "grevlex":
            return (sum(m),) + tuple(-e for e in reversed(m))
        if self.kind == "lex":
            return tuple(m)
        front = [m[i] for i in self.front]
        back = [e for i, e in enumerate(m) if i not in self.front]
        return ((sum(front),) + tuple(-e for e in reversed(front))
                + (sum(back),) + tuple(-e for e in reversed(back)))


GREVLEX = MonomialOrder.grevlex()
LEX = MonomialOrder.lex()


def compare_monomials(order: MonomialOrder, a: Sequence[int], b: Sequence[int]) -> Ordering:
    if len(a) != len(b):
        raise ValueError("monomials have different variable counts")
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    if ka < kb:
        return Ordering.LT
    if ka > kb:
        return Ordering.GT
    return Ordering.EQ


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(operator.add, a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(operator.sub, a, b))


@dataclass(frozen=True)
class Ring:
    """A polynomial ring over ``field`` in the named ``variables``.

    Variables are positional: two rings with the same names in a different
    order are different rings.
    """

    field: FieldSpec
    variables: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"repeated variable names in {self.variables}")

    @property
    def ngens(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a variable of {self}") from None

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field.coerce(c)
        if not c:
            return self.zero()
        return Polynomial(self, {(0,) * self.ngens: c})

    def var(self, name: str) -> "Polynomial":
        i = self.index(name)
        exp = tuple(1 if j == i else 0 for j in range(self.ngens))
        return Polynomial(self, {exp: self.field.coerce(1)})

    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.var(v) for v in self.variables)

    def monomial(self, exp: Sequence[int], c=1) -> "Polynomial":
        c = self.field.coerce(c)
        return Polynomial(self, {tuple(exp): c} if c else {})

    def from_terms(self, terms: Mapping[Monomial, object]) -> "Polynomial":
        out = {}
        for m, c in terms.items():
            c = self.field.coerce(c)
            if c:
                out[tuple(m)] = c
        return Polynomial(self, out)

    def parse(self, text: str) -> "Polynomial":
        from .polyparse import parse_polynomial

        return parse_polynomial(text, self)

    def __call__(self, text: str) -> "Polynomial":
        return self.parse(text)

    def __str__(self):
        return f"{self.field.name}[{', '.join(self.variables)}]"


class Polynomial:
    """Immutable sparse polynomial in a :class:`Ring`."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Dict[Monomial, object]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def support(self) -> Tuple[int, ...]:
        """Indices of variables that occur with positive exponent."""
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return tuple(sorted(used))

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX):
        return self.terms[self.leading_monomial(order)]

    def sorted_terms(self, order: MonomialOrder = GREVLEX, reverse=True):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=reverse)

    def coefficient(self, m: Sequence[int]):
        return self.terms.get(tuple(m), self.ring.field.coerce(0))

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        p = self.ring.field.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if p:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, {m: (-c) % p for m, c in self.terms.items()})
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        p = self.ring.field.p
        out: Dict[Monomial, object] = {}
        add = operator.add
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(map(add, m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        if p:
            out = {m: c % p for m, c in out.items() if c % p}
        else:
            out = {m: c for m, c in out.items() if c}
        return Polynomial(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Polynomial":
        c = self.ring.field.coerce(c)
        if not c:
            return self.ring.zero()
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, {m: v * c % p for m, v in self.terms.items()})
        return Polynomial(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_monomial(self, exp: Monomial, c=1) -> "Polynomial":
        return Polynomial(self.ring, {monomial_mul(m, exp): v for m, v in self.terms.items()}).scale(c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient(order)))

    def derivative(self, name: str) -> "Polynomial":
        i = self.ring.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return self.ring.from_terms(out)

    def evaluate(self, point: Mapping[str, object]):
        """Value at a point given as ``{variable: field element}``."""
        f = self.ring.field
        vals = [f.coerce(point[v]) for v in self.ring.variables]
        total = f.coerce(0)
        for m, c in self.terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    t = t * v ** e
            total = total + t
        return f.coerce(total) if f.p else total

    # -- structural --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or isinstance(other, _RATIONAL_TYPES):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)


def format_polynomial(f: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    """Render ``f`` with terms in decreasing ``order``; e.g. ``x^2 - 2*x*y + 1``."""
    if not f.terms:
        return "0"
    fld = f.ring.field
    names = f.ring.variables
    pieces = []
    for m, c in f.sorted_terms(order):
        if fld.p:
            neg, mag = False, fld.format(c)
        else:
            neg = c < 0
            mag = fld.format(-c if neg else c)
        factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(names, m) if e]
        if not factors:
            body = mag
        elif mag == "1":
            body = "*".join(factors)
        else:
            body = mag + "*" + "*".join(factors)
        pieces.append((neg, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


def poly_combine(op: str, f: Polynomial, g: Polynomial) -> Polynomial:
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def substitute(f: Polynomial, assignment: Mapping[str, Polynomial], target: Ring = None) -> Polynomial:
    """Image of ``f`` under the ring map sending each variable to ``assignment[var]``."""
    missing = [v for i, v in enumerate(f.ring.variables)
               if v not in assignment and any(m[i] for m in f.terms)]
    if missing:
        raise MissingAssignment(f"no image for {missing}")
    if target is None:
        images = [assignment[v] for v in f.ring.variables if v in assignment]
        if not images:
            raise ValueError("cannot infer target ring of substitution")
        target = images[0].ring
    images = [assignment.get(v) for v in f.ring.variables]
    for img in images:
        if img is not None and img.ring != target:
            raise RingMismatch(f"image in {img.ring}, expected {target}")
    powers: Dict[Tuple[int, int], Polynomial] = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            powers[key] = images[i] if e == 1 else power(i, e - 1) * images[i]
        return powers[key]

    out = target.zero()
    for m, c in f.terms.items():
        t = target.const(c)
        for i, e in enumerate(m):
            if e:
                t = t * power(i, e)
        out = out + t
    return out


def rename(f: Polynomial, target: Ring, mapping: Mapping[str, str] = None) -> Polynomial:
    """Move ``f`` into ``target`` sending variable ``v`` to ``mapping.get(v, v)``."""
    if f.ring.field != target.field:
        raise RingMismatch("renaming across different fields")
    mapping = mapping or {}
    pos = []
    for i, v in enumerate(f.ring.variables):
        new = mapping.get(v, v)
        pos.append(target.variables.index(new) if new in target.variables else None)
    out = {}
    n = target.ngens
    for m, c in f.terms.items():
        e = [0] * n
        for i, k in enumerate(m):
            if k:
                if pos[i] is None:
                    raise MissingAssignment(f"{f.ring.variables[i]} has no image in {target}")
                e[pos[i]] += k
        e = tuple(e)
        out[e] = out.get(e, 0) + c
    return target.from_terms(out)
