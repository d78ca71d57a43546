"""Truncated motivic zeta series and recognition of their closed forms.

Series are indexed from ``n = 1``.  The coefficient at ``t^n`` is built from
level ``n`` of a point system; lengths of the members enter the ``L``
exponents while ``n`` is only the power of ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .arckit import PointSystem, auto_arc, stabilized_trace, weil_restrict
from .errors import DimensionMismatch, TailMismatch, TraceNotStabilized
from .grotkit import MotivicClass, class_of_scheme, sigma_reduce
from .schemekit import SchemePresentation

DEFAULT_TRACE_DEPTH = 6


@dataclass(eq=False)
class TruncatedSeries:
    """``coefficients[n - 1]`` is the coefficient of ``t^n``."""

    coefficients: List[MotivicClass]
    provenance: Tuple[str, str, str] = ("", "", "")

    @property
    def N(self) -> int:
        return len(self.coefficients)

    def coefficient(self, n: int) -> MotivicClass:
        return self.coefficients[n - 1]

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __str__(self):
        return " + ".join(f"({c})*t^{n}" for n, c in enumerate(self.coefficients, start=1))


@dataclass(eq=False)
class RationalSeriesForm:
    """``sum_{n<=k} c_n t^n + mu * L^b * (L^q t)^(k+1) / (1 - L^q t)``."""

    polynomial: List[MotivicClass]
    mu: MotivicClass
    q: int
    b: int
    k: int

    def tail_coefficient(self, n: int) -> MotivicClass:
        return self.mu.scale_L(self.b + self.q * n)

    def expand(self, N: int) -> List[MotivicClass]:
        return [self.polynomial[n - 1] if n <= self.k else self.tail_coefficient(n)
                for n in range(1, N + 1)]

    def __str__(self):
        head = [f"({c})*t^{n}" for n, c in enumerate(self.polynomial, start=1)]
        step = "t" if self.q == 0 else f"{_l_power(self.q)}*t"
        top = step if self.k == 0 else f"({step})^{self.k + 1}"
        scale = [] if self.mu == MotivicClass.one(self.mu.field) else [f"({self.mu})"]
        if self.b:
            scale.append(_l_power(self.b))
        tail = "*".join(scale + [top]) + f"/(1 - {step})"
        return " + ".join(head + [tail])


def _l_power(e: int) -> str:
    return "L" if e == 1 else f"L^{e}" if e > 0 else f"L^({e})"


def _check_dim(X: SchemePresentation, d: int):
    actual = X.dim()
    if actual != d:
        raise DimensionMismatch(f"asserted dim {d}, computed {actual}")


def igusa_zeta_truncated(X: SchemePresentation, system: PointSystem, N: int, d: int) -> TruncatedSeries:
    _check_dim(X, d)
    coeffs = []
    for n in range(1, N + 1):
        point = system.member(n)
        c = class_of_scheme(weil_restrict(X, point).presentation).scale_L(-d * point.length)
        c.provenance = f"level {n}, length {point.length}"
        coeffs.append(c)
    return TruncatedSeries(coeffs, (X.label, str(system), "igusa"))


def poincare_truncated(X: SchemePresentation, system: PointSystem, N: int, d: int,
                       max_depth: int = DEFAULT_TRACE_DEPTH) -> TruncatedSeries:
    """Coefficient ``n`` is the class of the stabilized trace at level ``n``.

    Each level probes to depth ``max(max_depth, n + 2)``.
    """
    _check_dim(X, d)
    coeffs = []
    for n in range(1, N + 1):
        trace = stabilized_trace(X, system, n, max(max_depth, n + 2))
        if not trace.stabilized:
            raise TraceNotStabilized(n)
        point = system.member(n)
        P = SchemePresentation(trace.ideal.ring, trace.ideal, f"trace_{n}({X.label})")
        c = class_of_scheme(P).scale_L(-d * point.length)
        c.provenance = f"level {n}, length {point.length}, trace depth {trace.probe_depth}"
        coeffs.append(c)
    return TruncatedSeries(coeffs, (X.label, str(system), "poincare"))


def auto_igusa_weightless_truncated(system: PointSystem, N: int,
                                    weights: Optional[Sequence[int]] = None) -> TruncatedSeries:
    """Coefficient ``n`` is ``[nabla_n n] * L^(-l(n))``, ``l(n) = dim nabla_n n`` by default."""
    coeffs = []
    for n in range(1, N + 1):
        arcs = auto_arc(system.member(n))
        weight = arcs.dim() if weights is None else weights[n - 1]
        c = class_of_scheme(arcs.presentation).scale_L(-weight)
        c.provenance = f"level {n}, weight {weight}"
        coeffs.append(c)
    return TruncatedSeries(coeffs, ("", str(system), "autozeta"))


def sigma_series(S: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries([sigma_reduce(c) for c in S.coefficients],
                           (S.provenance[0], S.provenance[1], f"sigma {S.provenance[2]}"))


def stable_closed_form(S: TruncatedSeries, k: int, mu: MotivicClass, q: int, b: int) -> RationalSeriesForm:
    if not 0 <= k < S.N:
        raise ValueError(f"need 0 <= k < {S.N}")
    form = RationalSeriesForm(list(S.coefficients[:k]), mu, q, b, k)
    for n in range(k + 1, S.N + 1):
        if form.tail_coefficient(n) != S.coefficient(n):
            raise TailMismatch(n)
    return form


def _q_candidates(bound: int):
    yield 0
    for q in range(1, bound + 1):
        yield q
        yield -q


def recognize_rational(S: TruncatedSeries, q_bound: int = 4) -> Optional[RationalSeriesForm]:
    """Smallest ``k``, then smallest ``|q|``, whose geometric tail fits every coefficient.

    The tail class is solved from coefficient ``k + 1`` with ``b = 0``; at least
    two further coefficients must confirm it.
    """
    for k in range(0, S.N - 2):
        for q in _q_candidates(q_bound):
            mu = S.coefficient(k + 1).scale_L(-q * (k + 1))
            try:
                return stable_closed_form(S, k, mu, q, 0)
            except TailMismatch:
                continue
    return None
