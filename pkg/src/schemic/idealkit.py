"""Groebner bases and the ideal-theoretic toolbox built on them.

The engine is Buchberger's algorithm with the Gebauer-Moeller pair update
(coprime and chain criteria) and normal pair selection.  Everything else
(membership, elimination, radicals, dimension, standard monomials) is a thin
layer over reduced bases.
"""

from __future__ import annotations

import heapq
import itertools
import operator
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (InseparableCase, NotArtinian, NotZeroDimensional,
                     RingMismatch)
from .exactalg import (GREVLEX, Monomial, MonomialOrder, Polynomial, Ring,
                       monomial_divides, monomial_lcm, rename, substitute)

_add = operator.add
_sub = operator.sub


# ---------------------------------------------------------------------------
# low-level reduction on term dictionaries


class _Keyer:
    """Memoised order keys; the heap stores negated keys for max-first pops."""

    __slots__ = ("order", "cache", "neg")

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.cache: Dict[Monomial, tuple] = {}
        self.neg: Dict[Monomial, tuple] = {}

    def __call__(self, m):
        k = self.cache.get(m)
        if k is None:
            k = self.cache[m] = self.order.key(m)
        return k

    def negkey(self, m):
        k = self.neg.get(m)
        if k is None:
            k = self.neg[m] = tuple(-x for x in self(m))
        return k


def _lead(f: dict, K: _Keyer) -> Monomial:
    return max(f, key=K)


def _make_monic(f: dict, lm, p):
    c = f[lm]
    if p:
        inv = pow(int(c), -1, p)
        return {m: v * inv % p for m, v in f.items()}
    if c == 1:
        return f
    inv = 1 / c
    return {m: v * inv for m, v in f.items()}


def _reduce(f: dict, reducers: Sequence[Tuple[Monomial, dict]], K: _Keyer, p: int,
            full: bool = True) -> dict:
    """Remainder of ``f`` on division by monic ``reducers``."""
    if not f or not reducers:
        return dict(f)
    f = dict(f)
    heap = [(K.negkey(m), m) for m in f]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, None)
        if c is None:
            continue
        for lm, g in reducers:
            if all(a <= b for a, b in zip(lm, m)):
                q = tuple(map(_sub, m, lm))
                for e, gc in g.items():
                    if e == lm:
                        continue
                    e2 = tuple(map(_add, e, q))
                    old = f.get(e2)
                    if old is None:
                        v = -c * gc
                        if p:
                            v %= p
                        if v:
                            f[e2] = v
                            heapq.heappush(heap, (K.negkey(e2), e2))
                    else:
                        v = old - c * gc
                        if p:
                            v %= p
                        if v:
                            f[e2] = v
                        else:
                            del f[e2]
                break
        else:
            rem[m] = c
            if not full:
                rem.update(f)
                return rem
    return rem


def _spoly(f, lmf, g, lmg, p):
    lcm = tuple(map(max, lmf, lmg))
    qf = tuple(map(_sub, lcm, lmf))
    qg = tuple(map(_sub, lcm, lmg))
    out = {}
    for m, c in f.items():
        out[tuple(map(_add, m, qf))] = c
    for m, c in g.items():
        e = tuple(map(_add, m, qg))
        v = out.get(e, 0) - c
        if p:
            v %= p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _coprime(a, b):
    return not any(x and y for x, y in zip(a, b))


def _buchberger(polys: Iterable[dict], order: MonomialOrder, p: int) -> List[dict]:
    K = _Keyer(order)
    basis: List[Tuple[Monomial, dict]] = []  # every element ever added
    live: List[int] = []  # indices of the current basis
    pairs = set()
    heap = []

    def live_reducers():
        return [basis[i] for i in live]

    def add(h):
        lmh = _lead(h, K)
        h = _make_monic(h, lmh, p)
        basis.append((lmh, h))
        ih = len(basis) - 1
        lm = [basis[i][0] for i in range(len(basis))]
        # Gebauer-Moeller update
        C = list(live)
        D = []
        while C:
            g1 = C.pop()
            lcm1 = monomial_lcm(lmh, lm[g1])
            if _coprime(lmh, lm[g1]) or not any(
                    monomial_divides(monomial_lcm(lmh, lm[g2]), lcm1) for g2 in C + D):
                D.append(g1)
        E = [g for g in D if not _coprime(lmh, lm[g])]
        for pr in list(pairs):
            a, b = pr
            lab = monomial_lcm(lm[a], lm[b])
            if (monomial_divides(lmh, lab) and monomial_lcm(lm[a], lmh) != lab
                    and monomial_lcm(lmh, lm[b]) != lab):
                pairs.discard(pr)
        for g in E:
            pr = (g, ih)
            pairs.add(pr)
            heapq.heappush(heap, (K(monomial_lcm(lm[g], lmh)), g, ih))
        live[:] = [g for g in live if not monomial_divides(lmh, lm[g])] + [ih]

    for f in polys:
        if not f:
            continue
        r = _reduce(f, live_reducers(), K, p)
        if r:
            add(r)
    while pairs:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        pairs.discard((i, j))
        (lmi, gi), (lmj, gj) = basis[i], basis[j]
        s = _spoly(gi, lmi, gj, lmj, p)
        r = _reduce(s, live_reducers(), K, p)
        if r:
            add(r)
    # minimalize then interreduce
    elems = sorted((basis[i] for i in live), key=lambda t: K(t[0]))
    minimal = []
    for lm, g in elems:
        if not any(monomial_divides(l2, lm) for l2, _ in minimal):
            minimal.append((lm, g))
    out = []
    for k, (lm, g) in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        tail = {m: c for m, c in g.items() if m != lm}
        r = _reduce(tail, others, K, p)
        r[lm] = g[lm]
        out.append(r)
    return out


# ---------------------------------------------------------------------------
# public types


@dataclass(frozen=True)
class ReducedGB:
    """A reduced Groebner basis, sorted by increasing leading monomial."""

    ring: Ring
    order: MonomialOrder
    basis: Tuple[Polynomial, ...]

    @property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return tuple(g.leading_monomial(self.order) for g in self.basis)

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)


class Ideal:
    """A finitely generated ideal with cached reduced Groebner bases."""

    def __init__(self, ring: Ring, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            if g.ring != ring:
                raise RingMismatch(f"generator in {g.ring}, ideal in {ring}")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self._gb: Dict[MonomialOrder, ReducedGB] = {}

    @classmethod
    def unit(cls, ring: Ring) -> "Ideal":
        return cls(ring, [ring.one()])

    def groebner(self, order: MonomialOrder = GREVLEX) -> ReducedGB:
        gb = self._gb.get(order)
        if gb is None:
            gb = self._gb.setdefault(order, reduced_groebner(self, order))
        return gb

    def is_unit(self) -> bool:
        return self.groebner().is_unit()

    def is_zero(self) -> bool:
        return not self.generators

    def __contains__(self, f: Polynomial) -> bool:
        return ideal_member(f, self)

    def __add__(self, other) -> "Ideal":
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatch("sum of ideals in different rings")
            return Ideal(self.ring, self.generators + other.generators)
        return Ideal(self.ring, self.generators + tuple(other))

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    def __hash__(self):
        return hash((self.ring, self.groebner().basis))

    def __repr__(self):
        return f"Ideal({self.ring}, ({', '.join(map(str, self.generators))}))"


def reduced_groebner(I: Ideal, order: MonomialOrder = GREVLEX) -> ReducedGB:
    p = I.ring.field.p
    raw = _buchberger((dict(g.terms) for g in I.generators), order, p)
    K = _Keyer(order)
    raw.sort(key=lambda f: K(_lead(f, K)))
    basis = tuple(Polynomial(I.ring, f) for f in raw)
    return ReducedGB(I.ring, order, basis)


def normal_form(f: Polynomial, G: ReducedGB) -> Polynomial:
    if f.ring != G.ring:
        raise RingMismatch(f"{f.ring} vs {G.ring}")
    K = _Keyer(G.order)
    reducers = [(g.leading_monomial(G.order), g.terms) for g in G.basis]
    return Polynomial(f.ring, _reduce(f.terms, reducers, K, f.ring.field.p))


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    fm, gm = f.monic(order), g.monic(order)
    return Polynomial(f.ring, _spoly(fm.terms, fm.leading_monomial(order),
                                     gm.terms, gm.leading_monomial(order), f.ring.field.p))


def buchberger_criterion(G: ReducedGB) -> bool:
    """True when every S-polynomial of ``G`` reduces to zero modulo ``G``."""
    for f, g in itertools.combinations(G.basis, 2):
        if normal_form(s_polynomial(f, g, G.order), G):
            return False
    return True


def ideal_member(f: Polynomial, I: Ideal) -> bool:
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    return not normal_form(f, I.groebner())


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring} vs {J.ring}")
    return I.groebner().basis == J.groebner().basis


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """True when ``J`` is contained in ``I``."""
    return all(ideal_member(g, I) for g in J.generators)


def eliminate(I: Ideal, drop: Iterable[str]) -> Ideal:
    """``I`` intersected with the subring of the variables not in ``drop``.

    The result lives in the ring of the remaining variables, in their original
    order.
    """
    drop = set(drop)
    ring = I.ring
    unknown = drop - set(ring.variables)
    if unknown:
        raise KeyError(f"not variables of {ring}: {sorted(unknown)}")
    keep = tuple(v for v in ring.variables if v not in drop)
    target = Ring(ring.field, keep)
    if not drop:
        return Ideal(target, I.generators)
    front = [ring.index(v) for v in drop]
    G = I.groebner(MonomialOrder.block(front))
    kept = [g for g in G.basis if not any(i in front for i in g.support())]
    return Ideal(target, [rename(g, target) for g in kept])


def _fresh_name(ring: Ring, stem: str) -> str:
    name, k = stem, 0
    while name in ring.variables:
        k += 1
        name = f"{stem}{k}"
    return name


def radical_member(f: Polynomial, I: Ideal) -> bool:
    """Rabinowitsch test: ``f`` lies in the radical of ``I``."""
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    if not f:
        return True
    G = I.groebner()
    if G.is_unit():
        return True
    power = f
    for _ in range(4):
        if not normal_form(power, G):
            return True
        power = power * f
    t = _fresh_name(I.ring, "_t")
    big = Ring(I.ring.field, I.ring.variables + (t,))
    lifted = [rename(g, big) for g in G.basis]
    lifted.append(big.one() - big.var(t) * rename(f, big))
    return Ideal(big, lifted).is_unit()



def saturate(I: Ideal, f: Polynomial) -> Ideal:
    """``I : f^infinity``, by eliminating ``t`` from ``I + (1 - t*f)``."""
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    t = _fresh_name(I.ring, "_t")
    big = Ring(I.ring.field, I.ring.variables + (t,))
    lifted = [rename(g, big) for g in I.groebner().basis]
    lifted.append(big.one() - big.var(t) * rename(f, big))
    return Ideal(I.ring, eliminate(Ideal(big, lifted), [t]).generators)

def _min_hitting_set(supports: List[frozenset], budget: int) -> Optional[int]:
    """Size of a smallest set meeting every support, or None if > budget."""
    if not supports:
        return 0
    if budget <= 0:
        return None
    first = min(supports, key=len)
    best = None
    for v in sorted(first):
        rest = [s for s in supports if v not in s]
        sub = _min_hitting_set(rest, (budget if best is None else best - 1) - 1)
        if sub is not None and (best is None or sub + 1 < best):
            best = sub + 1
    return best


def krull_dim(I: Ideal) -> int:
    """Krull dimension of ring/I from the leading-term ideal; -1 for (1)."""
    G = I.groebner()
    if G.is_unit():
        return -1
    n = I.ring.ngens
    supports = {frozenset(i for i, e in enumerate(m) if e) for m in G.leading_monomials}
    # only minimal supports matter
    supports = [s for s in supports if not any(t < s for t in supports)]
    return n - _min_hitting_set(sorted(supports, key=sorted), n)


def independent_sets(I: Ideal) -> List[Tuple[str, ...]]:
    """Maximal-size variable sets independent modulo the leading-term ideal."""
    d = krull_dim(I)
    if d < 0:
        return []
    lms = I.groebner().leading_monomials
    out = []
    for combo in itertools.combinations(range(I.ring.ngens), d):
        s = set(combo)
        if not any(all(i in s for i, e in enumerate(m) if e) for m in lms):
            out.append(tuple(I.ring.variables[i] for i in combo))
    return out


def standard_monomials(I: Ideal, order: MonomialOrder = GREVLEX) -> List[Monomial]:
    """Monomials outside the leading-term ideal, in increasing ``order``."""
    if krull_dim(I) > 0:
        raise NotArtinian(f"{I} has infinitely many standard monomials")
    G = I.groebner(order)
    if G.is_unit():
        return []
    lms = G.leading_monomials
    n = I.ring.ngens
    start = (0,) * n
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                e = m[:i] + (m[i] + 1,) + m[i + 1:]
                if e in seen or any(monomial_divides(l, e) for l in lms):
                    continue
                seen.add(e)
                nxt.append(e)
        frontier = nxt
    return sorted(seen, key=order.key)


# ---------------------------------------------------------------------------
# univariate helpers (coefficient lists, lowest degree first)


def _trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _udivmod(a, b, fld):
    a = list(a)
    q = [fld.coerce(0)] * max(len(a) - len(b) + 1, 0)
    inv = fld.inv(b[-1])
    p = fld.p
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        if p:
            c %= p
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            v = a[k + i] - c * bc
            a[k + i] = v % p if p else v
        _trim(a)
    return _trim(q), a


def _ugcd(a, b, fld):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _udivmod(a, b, fld)
        a, b = b, r
    if not a:
        return a
    inv = fld.inv(a[-1])
    return [c * inv % fld.p if fld.p else c * inv for c in a]


def _uderiv(a, fld):
    out = [c * i for i, c in enumerate(a)][1:]
    return _trim([c % fld.p for c in out] if fld.p else out)


def _squarefree_part(f, fld):
    """Squarefree part of a monic univariate polynomial (separable case)."""
    if fld.p:
        if all(not c for c in f[:-1]):
            return [fld.coerce(0), fld.coerce(1)] if len(f) > 1 else f
        if len(f) - 1 >= fld.p:
            raise InseparableCase(
                f"degree {len(f) - 1} minimal polynomial in characteristic {fld.p}")
    g = _ugcd(f, _uderiv(f, fld), fld)
    q, _ = _udivmod(f, g, fld)
    inv = fld.inv(q[-1])
    return [c * inv % fld.p if fld.p else c * inv for c in q]


def _is_separable(f, fld) -> bool:
    d = _uderiv(f, fld)
    return bool(d) and len(_ugcd(f, d, fld)) == 1


def _univariate_coeffs(f: Polynomial, i: int):
    deg = max(m[i] for m in f.terms)
    out = [f.ring.field.coerce(0)] * (deg + 1)
    for m, c in f.terms.items():
        out[m[i]] = c
    return out


def _from_univariate(coeffs, ring: Ring, i: int) -> Polynomial:
    n = ring.ngens
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            terms[tuple(k if j == i else 0 for j in range(n))] = c
    return Polynomial(ring, terms)


def minimal_polynomial(f: Polynomial, I: Ideal) -> List:
    """Monic minimal polynomial (coefficients, low degree first) of ``f`` in ring/I.

    Requires ring/I to be finite dimensional; uses linear algebra on the
    standard-monomial basis.
    """
    if krull_dim(I) != 0:
        raise NotZeroDimensional(f"{I} is not zero-dimensional")
    G = I.groebner()
    size = len(standard_monomials(I)) + 1
    fld = I.ring.field
    p = fld.p
    zero, one = fld.coerce(0), fld.coerce(1)
    rows = []  # (pivot monomial, reduced vector, combination of powers)
    power = normal_form(I.ring.one(), G)
    for k in range(size):
        vec = dict(power.terms)
        combo = [zero] * size
        combo[k] = one
        for piv, rvec, rcombo in rows:
            c = vec.get(piv)
            if not c:
                continue
            for m, v in rvec.items():
                nv = vec.get(m, 0) - c * v
                if p:
                    nv %= p
                if nv:
                    vec[m] = nv
                else:
                    vec.pop(m, None)
            for j in range(size):
                if rcombo[j]:
                    nv = combo[j] - c * rcombo[j]
                    combo[j] = nv % p if p else nv
        if not vec:
            return _trim(combo)
        piv = max(vec, key=GREVLEX.key)
        inv = fld.inv(vec[piv])
        vec = {m: (v * inv % p if p else v * inv) for m, v in vec.items()}
        combo = [(v * inv % p if p else v * inv) for v in combo]
        rows.append((piv, vec, combo))
        power = normal_form(power * f, G)
    raise AssertionError("no linear relation among powers; length miscounted")


def zero_dim_radical(I: Ideal) -> Ideal:
    """Seidenberg: adjoin the squarefree part of each variable's minimal polynomial."""
    if krull_dim(I) != 0:
        raise NotZeroDimensional(f"{I} is not zero-dimensional")
    fld = I.ring.field
    extra = []
    for i, v in enumerate(I.ring.variables):
        mp = minimal_polynomial(I.ring.var(v), I)
        sq = _squarefree_part(mp, fld)
        extra.append(_from_univariate(sq, I.ring, i))
    J = I + extra
    return Ideal(I.ring, J.groebner().basis)


# ---------------------------------------------------------------------------
# linear-variable elimination and radical certificates


def _solvable_variable(g: Polynomial) -> Optional[int]:
    """Index of a variable occurring in ``g`` only as a bare linear term."""
    for i in g.support():
        ok = True
        for m in g.terms:
            if m[i] and (m[i] != 1 or sum(m) != 1):
                ok = False
                break
        if ok:
            return i
    return None


def eliminate_linear_variables(I: Ideal) -> Tuple[Ideal, Dict[str, Polynomial]]:
    """Repeatedly solve generators of the form ``c*x - h`` with ``x`` absent from ``h``.

    Returns an ideal in the ring of the surviving variables whose quotient is
    isomorphic to ring/I, together with the substitutions made; each value is
    written in the ring current at the step it was solved.
    """
    ring = I.ring
    gens = list(I.groebner().basis)
    solved: Dict[str, Polynomial] = {}
    while True:
        if len(gens) == 1 and gens[0].is_constant():
            return Ideal(ring, gens), solved
        pick = None
        for g in gens:
            i = _solvable_variable(g)
            if i is not None:
                pick = (g, i)
                break
        if pick is None:
            return Ideal(ring, gens), solved
        g, i = pick
        name = ring.variables[i]
        e = tuple(1 if j == i else 0 for j in range(ring.ngens))
        c = g.terms[e]
        value = (ring.monomial(e, c) - g).scale(ring.field.inv(c))
        target = Ring(ring.field, tuple(v for v in ring.variables if v != name))
        value_t = rename(value, target)
        images = {v: target.var(v) for v in target.variables}
        images[name] = value_t
        new = [substitute(h, images, target) for h in gens if h is not g]
        solved[name] = value
        ring = target
        gens = list(Ideal(ring, new).groebner().basis)


def _components(gens: Sequence[Polynomial]) -> List[List[Polynomial]]:
    groups: List[Tuple[set, List[Polynomial]]] = []
    for g in gens:
        s = set(g.support())
        merged = [grp for grp in groups if grp[0] & s]
        for grp in merged:
            groups.remove(grp)
            s |= grp[0]
        members = [h for grp in merged for h in grp[1]] + [g]
        groups.append((s, members))
    return [members for _, members in groups]


def certify_radical(I: Ideal) -> bool:
    """Sound (incomplete) test that ``I`` is a radical ideal."""
    G = I.groebner()
    if G.is_unit() or not G.basis:
        return True
    fld = I.ring.field
    J, _ = eliminate_linear_variables(I)
    gens = list(J.groebner().basis)
    if not gens or (len(gens) == 1 and gens[0].is_constant()):
        return True
    for comp in _components(gens):
        support = sorted({i for g in comp for i in g.support()})
        if len(comp) == 1 and len(support) == 1:
            if _is_separable(_univariate_coeffs(comp[0], support[0]), fld):
                continue
            return False
        if all(len(g.terms) == 1 and max(next(iter(g.terms))) <= 1 for g in comp):
            continue
        sub = Ring(fld, tuple(J.ring.variables[i] for i in support))
        local = Ideal(sub, [rename(g, sub) for g in comp])
        if krull_dim(local) == 0:
            try:
                rad = zero_dim_radical(local)
            except InseparableCase:
                return False
            if ideal_equal(rad, local):
                continue
        return False
    return True


def _linear_part(g: Polynomial) -> Polynomial:
    return g.ring.from_terms({m: c for m, c in g.terms.items() if sum(m) == 1})


def radical_closure(I: Ideal) -> Tuple[Ideal, bool]:
    """Grow ``I`` towards its radical by adjoining certified radical members.

    Returns ``(J, certified)`` with ``I <= J <= rad(I)``; ``certified`` says
    that ``J`` was shown to be radical, hence equal to ``rad(I)``.
    """
    ring = I.ring
    J = Ideal(ring, I.groebner().basis)
    if J.is_unit():
        return J, True
    while True:
        changed = False
        G = J.groebner()
        candidates: List[Polynomial] = list(ring.gens())
        for g in G.basis:
            lin = _linear_part(g)
            if lin and len(lin.terms) > 1:
                candidates.append(lin)
            if len(g.terms) == 1:
                m = next(iter(g.terms))
                if max(m) > 1:
                    candidates.append(ring.monomial(tuple(min(e, 1) for e in m)))
            elif len(g.support()) == 1:
                i = g.support()[0]
                try:
                    sq = _squarefree_part(_univariate_coeffs(g, i), ring.field)
                except InseparableCase:
                    continue
                candidates.append(_from_univariate(sq, ring, i))
        seen = set()
        for c in candidates:
            if c in seen:
                continue
            seen.add(c)
            if not normal_form(c, J.groebner()):
                continue
            if radical_member(c, J):
                J = Ideal(ring, J.groebner().basis + (c,))
                J = Ideal(ring, J.groebner().basis)
                changed = True
        if not changed:
            break
    if krull_dim(J) == 0:
        try:
            return zero_dim_radical(J), True
        except InseparableCase:
            return J, False
    return J, certify_radical(J)
