import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from schemic.exactalg import FieldSpec, Ring
from schemic.schemekit import SchemePresentation, make_fatpoint

settings.register_profile("schemic", deadline=None, max_examples=40)
settings.load_profile("schemic")

QQ = FieldSpec()

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def scheme(variables, gens, label="X", fld=QQ):
    return SchemePresentation.from_strings(fld, variables, gens, label)


def fatpoint(variables, gens, label="m", fld=QQ):
    return make_fatpoint(scheme(variables, gens, label, fld))


@pytest.fixture
def qq_xy():
    return Ring(QQ, ("x", "y"))


def random_polynomial(rng: random.Random, ring: Ring, max_deg=3, max_terms=4, coeff=5):
    n = ring.ngens
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exp = [0] * n
        for _ in range(rng.randint(0, max_deg)):
            exp[rng.randrange(n)] += 1
        c = rng.randint(-coeff, coeff)
        if c:
            terms[tuple(exp)] = terms.get(tuple(exp), 0) + c
    return ring.from_terms(terms)


@st.composite
def polynomials(draw, ring: Ring, max_deg=3, max_terms=4):
    n = ring.ngens
    exps = st.lists(st.integers(0, max_deg), min_size=n, max_size=n).map(tuple)
    exps = exps.filter(lambda e: sum(e) <= max_deg)
    coeffs = st.fractions(min_value=-6, max_value=6, max_denominator=3)
    terms = draw(st.dictionaries(exps, coeffs, max_size=max_terms))
    return ring.from_terms({m: Fraction(c) for m, c in terms.items()})


# local artinian presentations at the origin of length at most 4
SMALL_FATPOINTS = [
    (("t",), ["t"]),
    (("t",), ["t^2"]),
    (("t",), ["t^3"]),
    (("t",), ["t^4"]),
    (("x", "y"), ["x^2", "x*y", "y^2"]),
    (("x", "y"), ["x^2", "y^2"]),
    (("x", "y"), ["x^3", "x*y", "y^2"]),
    (("x", "y"), ["y - x^2", "x^3"]),
    (("x", "y"), ["x^2 - y^2", "x*y"]),
    (("x", "y", "z"), ["x^2", "y^2", "z^2", "x*y", "x*z", "y*z"]),
]
