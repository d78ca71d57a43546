"""Tokenizer and recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

Parsing produces a small tuple tree so that expressions can be written
before the ring they live in is known; :func:`to_polynomial` binds it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List

from .errors import SchemicError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class DSLSyntaxError(SchemicError):
    """Syntax error with a 1-based line/column and what was expected."""

    def __init__(self, line: int, col: int, expected: str, found: str = None):
        self.line, self.col, self.expected, self.found = line, col, expected, found
        got = "end of input" if found is None else repr(found)
        super().__init__(f"line {line}, col {col}: expected {expected}, found {got}")


@dataclass(frozen=True)
class VarRef:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col0: int = 1) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        col = m.start(m.lastindex) + col0
        if m.group(1):
            tokens.append(Token("int", m.group(1), line, col))
        elif m.group(2):
            tokens.append(Token("name", m.group(2), line, col))
        else:
            tokens.append(Token("op", m.group(3), line, col))
        pos = m.end()
    tokens.append(Token("end", "", line, len(text.rstrip()) + col0))
    return tokens


class TokenStream:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.peek().kind == "op" and self.peek().text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.next()
        self.fail(repr(text))

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(what)
        return self.next()

    def fail(self, expected: str):
        tok = self.peek()
        raise DSLSyntaxError(tok.line, tok.col, expected, None if tok.kind == "end" else tok.text)


def parse_expr(ts: TokenStream):
    node = _term(ts)
    while True:
        if ts.accept("+"):
            node = ("add", node, _term(ts))
        elif ts.accept("-"):
            node = ("sub", node, _term(ts))
        else:
            return node


def _term(ts):
    node = _factor(ts)
    while ts.accept("*"):
        node = ("mul", node, _factor(ts))
    return node


def _factor(ts):
    if ts.accept("-"):
        return ("neg", _factor(ts))
    node = _atom(ts)
    if ts.accept("^"):
        k = ts.expect_kind("int", "integer exponent")
        node = ("pow", node, int(k.text))
    return node


def _atom(ts):
    tok = ts.peek()
    if tok.kind == "int":
        ts.next()
        return ("int", int(tok.text))
    if tok.kind == "name":
        ts.next()
        return ("var", VarRef(tok.text, tok.line, tok.col))
    if ts.accept("("):
        node = parse_expr(ts)
        ts.expect(")")
        return node
    ts.fail("integer, variable or '('")


def expr_variables(node) -> List[VarRef]:
    """All variable references of an expression tree, in reading order."""
    if node[0] == "var":
        return [node[1]]
    if node[0] == "int":
        return []
    return [v for child in node[1:] if isinstance(child, tuple) for v in expr_variables(child)]


def to_polynomial(node, ring):
    kind = node[0]
    if kind == "int":
        return ring.const(node[1])
    if kind == "var":
        return ring.var(node[1].name)
    if kind == "neg":
        return -to_polynomial(node[1], ring)
    if kind == "pow":
        return to_polynomial(node[1], ring) ** node[2]
    a, b = to_polynomial(node[1], ring), to_polynomial(node[2], ring)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    return a * b


def format_expr(node) -> str:
    """Re-render an expression tree; parsing the result gives the same tree."""
    kind = node[0]
    if kind == "int":
        return str(node[1])
    if kind == "var":
        return node[1].name
    if kind == "neg":
        return f"-({format_expr(node[1])})"
    if kind == "pow":
        return f"({format_expr(node[1])})^{node[2]}"
    sym = {"add": "+", "sub": "-", "mul": "*"}[kind]
    return f"({format_expr(node[1])} {sym} {format_expr(node[2])})"


def parse_polynomial(text: str, ring):
    ts = TokenStream(tokenize(text))
    node = parse_expr(ts)
    if ts.peek().kind != "end":
        ts.fail("operator or end of expression")
    for ref in expr_variables(node):
        if ref.name not in ring.variables:
            raise DSLSyntaxError(ref.line, ref.col, f"a variable of {ring}", ref.name)
    return to_polynomial(node, ring)
