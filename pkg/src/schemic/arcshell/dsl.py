"""Line-oriented session scripts.

::

    field QQ | field Fp <p>
    ring R = [x, y]
    ideal I = { x^2, x*y, y^2 }
    scheme X = R/I
    fatpoint m = R/I
    system S = lsystem | jets(X, [0, 0]) | jets(X, origin)
    <command> [<Name> =] <arg>, ...

Command arguments are names, integers, ``key=value`` options or
``nabla(<fatpoint>, <scheme>)``.  ``#`` starts a comment; an ideal may span
several lines until its closing brace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from ..errors import SchemicError
from ..polyparse import (DSLSyntaxError, TokenStream, expr_variables, format_expr,
                         parse_expr, tokenize)

COMMANDS = ("arc", "autoarc", "reduce", "dim", "length", "simple", "defect", "trace",
            "probe", "measure", "zeta", "poincare", "autozeta", "sigma", "classof")
KEYWORDS = ("field", "ring", "ideal", "scheme", "fatpoint", "system") + COMMANDS
BUILTIN_POINT = re.compile(r"^l([1-9][0-9]*)$")
BUILTIN_SYSTEM = "lsystem"


class UnboundName(SchemicError):
    def __init__(self, name: str, line: int, col: int):
        self.name, self.line, self.col = name, line, col
        super().__init__(f"line {line}, col {col}: unbound name {name!r}")


class Redefinition(SchemicError):
    def __init__(self, name: str, line: int, col: int):
        self.name, self.line, self.col = name, line, col
        super().__init__(f"line {line}, col {col}: {name!r} is already defined")


def _pos():
    return field(default=0, compare=False)


@dataclass(frozen=True)
class FieldDecl:
    p: int
    line: int = _pos()

    def render(self):
        return "field QQ" if self.p == 0 else f"field Fp {self.p}"


@dataclass(frozen=True)
class RingDecl:
    name: str
    variables: Tuple[str, ...]
    line: int = _pos()

    def render(self):
        return f"ring {self.name} = [{', '.join(self.variables)}]"


@dataclass(frozen=True)
class IdealDecl:
    name: str
    generators: Tuple  # expression trees from polyparse
    line: int = _pos()

    def render(self):
        return f"ideal {self.name} = {{ {', '.join(format_expr(g) for g in self.generators)} }}"


@dataclass(frozen=True)
class SchemeDecl:
    kind: str  # "scheme" or "fatpoint"
    name: str
    ring: str
    ideal: str
    line: int = _pos()

    def render(self):
        return f"{self.kind} {self.name} = {self.ring}/{self.ideal}"


@dataclass(frozen=True)
class SystemDecl:
    name: str
    kind: str  # "lsystem" or "jets"
    scheme: Optional[str] = None
    point: Optional[Tuple[Fraction, ...]] = None  # None means the origin
    line: int = _pos()

    def render(self):
        if self.kind == "lsystem":
            return f"system {self.name} = lsystem"
        where = "origin" if self.point is None else "[" + ", ".join(str(c) for c in self.point) + "]"
        return f"system {self.name} = jets({self.scheme}, {where})"


@dataclass(frozen=True)
class Ref:
    name: str
    line: int = _pos()
    col: int = _pos()

    def render(self):
        return self.name


@dataclass(frozen=True)
class Nabla:
    point: Ref
    scheme: Ref

    def render(self):
        return f"nabla({self.point.name}, {self.scheme.name})"


@dataclass(frozen=True)
class Option:
    key: str
    value: Union[int, str]

    def render(self):
        return f"{self.key}={self.value}"


Arg = Union[Ref, Nabla, Option, int]


@dataclass(frozen=True)
class Command:
    command: str
    name: Optional[str]
    args: Tuple[Arg, ...]
    line: int = _pos()

    @property
    def ident(self) -> str:
        """``--cmd`` selector: the bound name, else the command text."""
        return self.name or self.render()

    def refs(self) -> List[Ref]:
        out = []
        for a in self.args:
            if isinstance(a, Ref):
                out.append(a)
            elif isinstance(a, Nabla):
                out.extend([a.point, a.scheme])
        return out

    def options(self) -> Dict[str, Union[int, str]]:
        return {a.key: a.value for a in self.args if isinstance(a, Option)}

    def positional(self) -> List[Union[Ref, Nabla, int]]:
        return [a for a in self.args if not isinstance(a, Option)]

    def render(self):
        args = ", ".join(str(a) if isinstance(a, int) else a.render() for a in self.args)
        head = f"{self.command} {self.name} =" if self.name else self.command
        return f"{head} {args}".rstrip()


Statement = Union[FieldDecl, RingDecl, IdealDecl, SchemeDecl, SystemDecl, Command]


@dataclass
class SessionScript:
    statements: List[Statement]

    def commands(self) -> List[Command]:
        return [s for s in self.statements if isinstance(s, Command)]

    def find(self, ident: str) -> Command:
        for c in self.commands():
            if c.ident == ident:
                return c
        raise KeyError(f"no command {ident!r} in script")

    def render(self) -> str:
        return "\n".join(s.render() for s in self.statements) + "\n"


# ---------------------------------------------------------------------------


def _name(ts: TokenStream, what: str = "a name"):
    tok = ts.expect_kind("name", what)
    return tok


def _end(ts: TokenStream):
    if ts.peek().kind != "end":
        ts.fail("end of line")


def _signed_rational(ts: TokenStream) -> Fraction:
    neg = ts.accept("-")
    num = int(ts.expect_kind("int", "an integer").text)
    den = 1
    if ts.accept("/"):
        den = int(ts.expect_kind("int", "an integer").text)
        if den == 0:
            ts.fail("a nonzero denominator")
    value = Fraction(num, den)
    return -value if neg else value


def _parse_field(ts, line):
    tok = _name(ts, "QQ or Fp")
    if tok.text == "QQ":
        _end(ts)
        return FieldDecl(0, line)
    if tok.text != "Fp":
        raise DSLSyntaxError(tok.line, tok.col, "QQ or Fp", tok.text)
    p = int(ts.expect_kind("int", "a prime").text)
    _end(ts)
    return FieldDecl(p, line)


def _parse_ring(ts, line):
    name = _name(ts).text
    ts.expect("=")
    ts.expect("[")
    variables = []
    if not ts.accept("]"):
        while True:
            variables.append(_name(ts, "a variable").text)
            if ts.accept("]"):
                break
            ts.expect(",")
    _end(ts)
    return RingDecl(name, tuple(variables), line)


def _parse_ideal(ts, line):
    name = _name(ts).text
    ts.expect("=")
    ts.expect("{")
    gens = []
    if not ts.accept("}"):
        while True:
            gens.append(parse_expr(ts))
            if ts.accept("}"):
                break
            if not ts.accept(","):
                ts.fail("'}'")
    _end(ts)
    return IdealDecl(name, tuple(gens), line)


def _parse_quotient(ts, kind, line):
    name = _name(ts).text
    ts.expect("=")
    ring = _name(ts, "a ring name")
    ts.expect("/")
    ideal = _name(ts, "an ideal name")
    _end(ts)
    return SchemeDecl(kind, name, ring.text, ideal.text, line), [ring, ideal]


def _parse_system(ts, line):
    name = _name(ts).text
    ts.expect("=")
    tok = _name(ts, "lsystem or jets")
    if tok.text == "lsystem":
        _end(ts)
        return SystemDecl(name, "lsystem", line=line), []
    if tok.text != "jets":
        raise DSLSyntaxError(tok.line, tok.col, "lsystem or jets", tok.text)
    ts.expect("(")
    scheme = _name(ts, "a scheme name")
    ts.expect(",")
    point = None
    if ts.accept("["):
        coords = []
        if not ts.accept("]"):
            while True:
                coords.append(_signed_rational(ts))
                if ts.accept("]"):
                    break
                ts.expect(",")
        point = tuple(coords)
    else:
        where = _name(ts, "a point or origin")
        if where.text != "origin":
            raise DSLSyntaxError(where.line, where.col, "a point or origin", where.text)
    ts.expect(")")
    _end(ts)
    return SystemDecl(name, "jets", scheme.text, point, line), [scheme]


def _parse_arg(ts) -> Arg:
    tok = ts.peek()
    if tok.kind == "int":
        ts.next()
        return int(tok.text)
    if ts.accept("-"):
        return -int(ts.expect_kind("int", "an integer").text)
    tok = _name(ts, "an argument")
    if ts.accept("="):
        val = ts.peek()
        if ts.accept("-"):
            return Option(tok.text, -int(ts.expect_kind("int", "an integer").text))
        if val.kind == "int":
            ts.next()
            return Option(tok.text, int(val.text))
        return Option(tok.text, _name(ts, "an option value").text)
    if tok.text == "nabla" and ts.accept("("):
        a = _name(ts, "a fat point name")
        ts.expect(",")
        b = _name(ts, "a scheme name")
        ts.expect(")")
        return Nabla(Ref(a.text, a.line, a.col), Ref(b.text, b.line, b.col))
    return Ref(tok.text, tok.line, tok.col)


def _parse_command(ts, cmd, line):
    name = None
    args = []
    if ts.peek().kind != "end":
        # "<cmd> N = ..." binds N; "<cmd> x, ..." does not
        save = ts.i
        first = ts.peek()
        if first.kind == "name":
            ts.next()
            if ts.accept("="):
                name = first.text
            else:
                ts.i = save
        if ts.peek().kind != "end":
            while True:
                args.append(_parse_arg(ts))
                if ts.peek().kind == "end":
                    break
                ts.expect(",")
    return Command(cmd, name, tuple(args), line)


def _logical_lines(text: str):
    """Yield ``(line_number, text)``; a line with an unclosed ``{`` absorbs the next ones."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        start = i
        raw = lines[i].split("#", 1)[0]
        while raw.count("{") > raw.count("}") and i + 1 < len(lines):
            i += 1
            raw = raw + " " + lines[i].split("#", 1)[0]
        i += 1
        if raw.strip():
            yield start + 1, raw


def parse_script(text: str) -> SessionScript:
    statements: List[Statement] = []
    bound: Dict[str, str] = {}  # name -> kind of object

    def define(name, kind, line, col):
        if name in bound:
            raise Redefinition(name, line, col)
        bound[name] = kind

    def resolve(tok_name, line, col, kinds=None):
        if tok_name in bound:
            if kinds and bound[tok_name] not in kinds:
                raise DSLSyntaxError(line, col, f"a {' or '.join(kinds)} name", tok_name)
            return
        if BUILTIN_POINT.match(tok_name) or tok_name == BUILTIN_SYSTEM:
            return
        raise UnboundName(tok_name, line, col)

    for line, raw in _logical_lines(text):
        ts = TokenStream(tokenize(raw, line))
        head = ts.peek()
        if head.kind != "name" or head.text not in KEYWORDS:
            ts.fail("a declaration or command")
        ts.next()
        kw = head.text
        if kw == "field":
            statements.append(_parse_field(ts, line))
            continue
        if kw in COMMANDS:
            cmd = _parse_command(ts, kw, line)
            for ref in cmd.refs():
                resolve(ref.name, ref.line, ref.col)
            if cmd.name:
                define(cmd.name, "result", line, ts.tokens[1].col)
            statements.append(cmd)
            continue
        name_tok = ts.peek()
        if kw == "ring":
            stmt = _parse_ring(ts, line)
        elif kw == "ideal":
            stmt = _parse_ideal(ts, line)
        elif kw in ("scheme", "fatpoint"):
            stmt, (ring_tok, ideal_tok) = _parse_quotient(ts, kw, line)
            if ring_tok.text not in bound:
                raise UnboundName(ring_tok.text, ring_tok.line, ring_tok.col)
            if ideal_tok.text not in bound:
                raise UnboundName(ideal_tok.text, ideal_tok.line, ideal_tok.col)
            resolve(ring_tok.text, ring_tok.line, ring_tok.col, ("ring",))
            resolve(ideal_tok.text, ideal_tok.line, ideal_tok.col, ("ideal",))
        else:
            stmt, refs = _parse_system(ts, line)
            for r in refs:
                resolve(r.text, r.line, r.col, ("scheme", "fatpoint", "result"))
        define(stmt.name, kw, name_tok.line, name_tok.col)
        if kw in ("scheme", "fatpoint"):
            ring = next(s for s in statements if isinstance(s, RingDecl) and s.name == stmt.ring)
            ideal = next(s for s in statements if isinstance(s, IdealDecl) and s.name == stmt.ideal)
            for g in ideal.generators:
                for ref in expr_variables(g):
                    if ref.name not in ring.variables:
                        raise DSLSyntaxError(ref.line, ref.col, f"a variable of ring {ring.name}",
                                             ref.name)
        statements.append(stmt)
    return SessionScript(statements)
