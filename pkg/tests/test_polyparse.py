import pytest
from hypothesis import given

from schemic.exactalg import Ring, format_polynomial
from schemic.polyparse import DSLSyntaxError, TokenStream, format_expr, parse_expr, parse_polynomial, tokenize

from conftest import QQ, polynomials

R = Ring(QQ, ("x", "y"))


def test_precedence_and_unary_minus():
    assert parse_polynomial("-x^2 + 3*x*y - (y - 1)^2", R) == R("-x^2 + 3*x*y - y^2 + 2*y - 1")
    assert parse_polynomial("2*-x", R) == R("-2*x")


def test_syntax_errors_carry_positions():
    with pytest.raises(DSLSyntaxError) as err:
        parse_polynomial("x + * y", R)
    assert (err.value.line, err.value.col) == (1, 5)
    with pytest.raises(DSLSyntaxError):
        parse_polynomial("x + z", R)
    with pytest.raises(DSLSyntaxError):
        parse_polynomial("(x + y", R)


def test_format_expr_is_fully_parenthesized():
    node = parse_expr(TokenStream(tokenize("x - y*x^2")))
    assert format_expr(node) == "(x - (y * (x)^2))"
    assert parse_polynomial(format_expr(node), R) == R("x - y*x^2")


@given(polynomials(R))
def test_parse_of_printed_polynomial(f):
    f = f.scale(6)
    if all(c.denominator == 1 for c in f.terms.values()):
        assert parse_polynomial(format_polynomial(f), R) == f
