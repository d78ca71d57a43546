"""Evaluate session scripts command by command, with cached result records."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from .. import ENGINE_VERSION
from ..arckit import (PointSystem, classify_simple, defect, make_point_system,
                      stability_probe, stabilized_trace, weil_restrict)
from ..errors import SchemicError
from ..exactalg import FieldSpec, Ring
from ..grotkit import (MotivicClass, class_dim, class_of_scheme, cone_class,
                       measure_rational_lax, measure_stable, sigma_reduce)
from ..idealkit import Ideal, eliminate_linear_variables, krull_dim
from ..polyparse import to_polynomial
from ..schemekit import FatPoint, SchemePresentation, make_fatpoint, reduce_scheme
from ..serieskit import (TruncatedSeries, auto_igusa_weightless_truncated,
                         igusa_zeta_truncated, poincare_truncated, recognize_rational,
                         sigma_series)
from . import render
from .cache import ResultCache, cache_key
from .dsl import (BUILTIN_POINT, BUILTIN_SYSTEM, Command, FieldDecl, IdealDecl, Nabla, Ref,
                  RingDecl, SchemeDecl, SessionScript, SystemDecl)


class CommandError(SchemicError):
    """A module error raised while running a command, with its location."""

    def __init__(self, cmd: Command, cause: Exception):
        self.command, self.cause = cmd, cause
        super().__init__(f"line {cmd.line}: {cmd.render()}: {type(cause).__name__}: {cause}")


@dataclass
class ExecOptions:
    char: int = 0
    max_depth: int = 6
    truncation: int = 6
    cache_dir: Optional[str] = None


@dataclass
class Outcome:
    value: object
    payload: dict
    certified: Optional[bool] = None
    stabilized: Optional[bool] = None


class Session:
    """Declarations are bound as they are read; commands run on demand."""

    def __init__(self, script: SessionScript, options: ExecOptions = ExecOptions()):
        self.script = script
        self.options = options
        self.cache = ResultCache(options.cache_dir)
        self.field = FieldSpec(options.char)
        self.rings: Dict[str, Ring] = {}
        self.ideals: Dict[str, IdealDecl] = {}
        self.schemes: Dict[str, SchemePresentation] = {}
        self.fatpoint_names: set = set()
        self.systems: Dict[str, PointSystem] = {}
        self.pending: Dict[str, Command] = {}
        self.values: Dict[str, Callable[[], object]] = {}
        self._fatpoints: Dict[str, FatPoint] = {}
        self._records: Dict[int, dict] = {}
        self._position = 0

    # -- declarations ------------------------------------------------------
    def _advance_to(self, stop: Command):
        """Bind every declaration that precedes ``stop``."""
        stmts = self.script.statements
        while self._position < len(stmts):
            stmt = stmts[self._position]
            if stmt is stop:
                return
            self._position += 1
            self._declare(stmt)

    def _declare(self, stmt):
        if isinstance(stmt, FieldDecl):
            self.field = FieldSpec(stmt.p)
        elif isinstance(stmt, RingDecl):
            self.rings[stmt.name] = Ring(self.field, stmt.variables)
        elif isinstance(stmt, IdealDecl):
            self.ideals[stmt.name] = stmt
        elif isinstance(stmt, SchemeDecl):
            ring = self.rings[stmt.ring]
            gens = [to_polynomial(g, ring) for g in self.ideals[stmt.ideal].generators]
            self.schemes[stmt.name] = SchemePresentation(ring, Ideal(ring, gens), stmt.name)
            if stmt.kind == "fatpoint":
                self.fatpoint_names.add(stmt.name)
        elif isinstance(stmt, SystemDecl):
            if stmt.kind == "lsystem":
                self.systems[stmt.name] = make_point_system("lsystem", self.field)
            else:
                base = self.scheme(Ref(stmt.scheme))
                point = None if stmt.point is None else tuple(stmt.point)
                self.systems[stmt.name] = make_point_system("jets", base.field, base, point)
        elif isinstance(stmt, Command) and stmt.name:
            self.pending[stmt.name] = stmt

    # -- name resolution ---------------------------------------------------
    def _result(self, name: str):
        if name not in self.values:
            self.run(self.pending[name])
        return self.values[name]()

    def scheme(self, ref: Ref) -> SchemePresentation:
        if ref.name in self.schemes:
            return self.schemes[ref.name]
        if ref.name in self.pending:
            value = self._result(ref.name)
            if isinstance(value, SchemePresentation):
                return value
            raise TypeError(f"{ref.name} is not a scheme")
        if BUILTIN_POINT.match(ref.name):
            return self.fatpoint(ref).presentation
        raise KeyError(ref.name)

    def fatpoint(self, ref: Ref) -> FatPoint:
        name = ref.name
        if name not in self._fatpoints:
            m = BUILTIN_POINT.match(name)
            if m and name not in self.schemes and name not in self.pending:
                ring = Ring(self.field, ("t",))
                P = SchemePresentation(ring, Ideal(ring, [ring.var("t") ** int(m.group(1))]), name)
            else:
                P = self.scheme(ref)
            self._fatpoints[name] = make_fatpoint(P)
        return self._fatpoints[name]

    def system(self, ref: Ref) -> PointSystem:
        if ref.name in self.systems:
            return self.systems[ref.name]
        if ref.name == BUILTIN_SYSTEM:
            self.systems[ref.name] = make_point_system("lsystem", self.field)
            return self.systems[ref.name]
        raise KeyError(ref.name)

    def is_value(self, ref: Ref) -> bool:
        return ref.name in self.pending and ref.name not in self.schemes

    # -- canonical inputs --------------------------------------------------
    def _describe_scheme(self, P: SchemePresentation) -> dict:
        return {k: v for k, v in render.presentation_payload(P).items() if k != "kind"}

    def describe(self, arg) -> object:
        if isinstance(arg, int):
            return str(arg)
        if isinstance(arg, Nabla):
            return {"nabla": [self.describe(arg.point), self.describe(arg.scheme)]}
        name = arg.name
        if name in self.systems or name == BUILTIN_SYSTEM:
            S = self.system(arg)
            if S.kind == "lsystem":
                return {"system": "lsystem", "field": S.field.name}
            return {"system": "jets", "scheme": self._describe_scheme(S.scheme),
                    "point": [str(c) for c in S.origin]}
        if name in self.pending:
            payload = self.run(self.pending[name])["payload"]
            if payload["kind"] == "presentation":
                return {k: payload[k] for k in ("ring", "variables", "generators")}
            return payload
        return self._describe_scheme(self.scheme(arg))

    # -- running -----------------------------------------------------------
    def run(self, cmd: Command) -> dict:
        """Result record of ``cmd``; repeated calls return the same record."""
        if id(cmd) in self._records:
            return self._records[id(cmd)]
        if not any(st is cmd for st in self.script.statements[:self._position]):
            self._advance_to(cmd)
        try:
            inputs = {"args": [self.describe(a) for a in cmd.positional()],
                      "options": {k: str(v) for k, v in sorted(cmd.options().items())},
                      "defaults": self._defaults(cmd)}
        except (SchemicError, KeyError, TypeError, ValueError) as exc:
            raise CommandError(cmd, exc) from exc
        key = cache_key(cmd.command, inputs, ENGINE_VERSION)
        start = time.perf_counter()
        computed: Dict[str, Outcome] = {}

        def compute() -> dict:
            try:
                outcome = HANDLERS[cmd.command](self, cmd)
            except (SchemicError, KeyError, TypeError, ValueError) as exc:
                raise CommandError(cmd, exc) from exc
            computed["outcome"] = outcome
            return {"command": cmd.render(), "ident": cmd.ident, "inputs": inputs,
                    "payload": outcome.payload,
                    "flags": {"certified": outcome.certified, "stabilized": outcome.stabilized,
                              "cache_hit": False},
                    "engine_version": ENGINE_VERSION, "cache_key": key}

        record, hit = self.cache.lookup_store(key, compute)
        record = dict(record)
        record["flags"] = dict(record["flags"], cache_hit=hit)
        record["ident"] = cmd.ident
        record["command"] = cmd.render()
        record["timing"] = {"elapsed_ms": f"{(time.perf_counter() - start) * 1000:.1f}"}
        self._records[id(cmd)] = record
        if cmd.name:
            if "outcome" in computed:
                value = computed["outcome"].value
                self.values[cmd.name] = lambda: value
            else:
                self.values[cmd.name] = self._lazy(cmd)
        return record

    def _lazy(self, cmd: Command):
        memo = {}

        def get():
            if "v" not in memo:
                memo["v"] = HANDLERS[cmd.command](self, cmd).value
            return memo["v"]
        return get

    def _defaults(self, cmd: Command) -> Dict[str, str]:
        out = {}
        if cmd.command in ("trace", "measure", "poincare"):
            out["max_depth"] = str(self.options.max_depth)
        if cmd.command in ("zeta", "autozeta", "poincare"):
            out["truncation"] = str(self.options.truncation)
        return out

    def run_all(self) -> List[dict]:
        return [self.run(c) for c in self.script.commands()]


def execute_command(script: SessionScript, name: str, options: ExecOptions = ExecOptions()) -> dict:
    session = Session(script, options)
    return session.run(script.find(name))


# ---------------------------------------------------------------------------
# command handlers


def _args(cmd: Command, count: int) -> list:
    pos = cmd.positional()
    if len(pos) < count:
        raise ValueError(f"{cmd.command} needs {count} arguments, got {len(pos)}")
    return pos


def _point_and_scheme(s: Session, cmd: Command):
    first = _args(cmd, 1)[0]
    if isinstance(first, Nabla):
        return s.fatpoint(first.point), s.scheme(first.scheme)
    if cmd.command == "autoarc":
        fp = s.fatpoint(first)
        return fp, fp.presentation
    raise ValueError("expected nabla(<fatpoint>, <scheme>)")


def _h_arc(s: Session, cmd: Command) -> Outcome:
    fp, X = _point_and_scheme(s, cmd)
    arcs = weil_restrict(X, fp)
    P = arcs.presentation
    if cmd.name:
        P.label = cmd.name
    return Outcome(P, render.presentation_payload(P))


def _h_reduce(s: Session, cmd: Command) -> Outcome:
    X = s.scheme(_args(cmd, 1)[0])
    red = reduce_scheme(X)
    P = red.reduced
    if cmd.name:
        P.label = cmd.name
    payload = render.presentation_payload(P)
    affine = None
    if red.certified:
        core, _ = eliminate_linear_variables(P.ideal)
        if core.is_zero():
            affine = core.ring.ngens
    payload["affine_dim"] = None if affine is None else render.num(affine)
    notes = []
    claim = cmd.options().get("claim")
    if claim is not None:
        if affine == claim:
            notes.append(f"claimed reduction A^{claim} confirmed")
        else:
            found = f"A^{affine}" if affine is not None else "not shown to be an affine space"
            notes.append(f"DISCREPANCY: claimed reduction A^{claim}, computed {found}")
    payload["notes"] = notes
    return Outcome(P, payload, certified=red.certified)


def _h_dim(s: Session, cmd: Command) -> Outcome:
    ref = _args(cmd, 1)[0]
    if s.is_value(ref):
        value = s._result(ref.name)
        if isinstance(value, MotivicClass):
            d = class_dim(value)
            return Outcome(d, render.integer_payload(d))
    d = krull_dim(s.scheme(ref).ideal)
    d = float("-inf") if d < 0 else d
    return Outcome(d, render.integer_payload(d))


def _h_length(s: Session, cmd: Command) -> Outcome:
    n = s.fatpoint(_args(cmd, 1)[0]).length
    return Outcome(n, render.integer_payload(n))


def _h_simple(s: Session, cmd: Command) -> Outcome:
    v = classify_simple(s.fatpoint(_args(cmd, 1)[0]))
    return Outcome(v, render.verdict_payload(v), certified=v.kind != "Inconclusive")


def _dim_option(cmd: Command, X: SchemePresentation) -> int:
    d = cmd.options().get("d")
    return X.dim() if d is None else int(d)


def _h_defect(s: Session, cmd: Command) -> Outcome:
    a, b = _args(cmd, 2)[:2]
    X = s.scheme(a)
    value = defect(X, s.fatpoint(b), _dim_option(cmd, X))
    return Outcome(value, render.integer_payload(value))


def _level(cmd: Command, key: str = "n") -> int:
    opts = cmd.options()
    if key not in opts:
        raise ValueError(f"{cmd.command} needs {key}=<level>")
    return int(opts[key])


def _depth(s: Session, cmd: Command) -> int:
    return int(cmd.options().get("depth", s.options.max_depth))


def _h_trace(s: Session, cmd: Command) -> Outcome:
    a, b = _args(cmd, 2)[:2]
    X, S = s.scheme(a), s.system(b)
    n = _level(cmd)
    tr = stabilized_trace(X, S, n, max(_depth(s, cmd), n + 1))
    ring = tr.ideal.ring
    P = SchemePresentation(ring, tr.ideal, cmd.name or f"trace_{n}({X.label})")
    payload = render.presentation_payload(P)
    payload.update(level=render.num(n), probe_depth=render.num(tr.probe_depth),
                   closure="zariski")
    return Outcome(P, payload, stabilized=tr.stabilized)


def _h_probe(s: Session, cmd: Command) -> Outcome:
    a, b = _args(cmd, 2)[:2]
    report = stability_probe(s.scheme(a), s.system(b), int(cmd.options().get("n", 3)))
    return Outcome(report, render.report_payload(report))


def _h_measure(s: Session, cmd: Command) -> Outcome:
    a, b = _args(cmd, 2)[:2]
    X, S = s.scheme(a), s.system(b)
    opts = cmd.options()
    d = _dim_option(cmd, X)
    depth = _depth(s, cmd)
    if "l" in opts:
        n = _level(cmd)
        value = measure_rational_lax(X, S, n, d, int(opts["l"]), max(depth, n + 1))
        payload = render.class_payload(value)
        payload.update(mode="rational-lax", level=render.num(n), l_value=render.num(opts["l"]))
        return Outcome(value, payload, certified=True, stabilized=True)
    level = _level(cmd, "s")
    value = measure_stable(X, S, level, d, max(depth, level + 1))
    payload = render.class_payload(value)
    payload.update(mode="stable", asserted_level=render.num(level))
    return Outcome(value, payload, stabilized=True)


def _truncation(s: Session, cmd: Command) -> int:
    return int(cmd.options().get("N", s.options.truncation))


def _series_outcome(S: TruncatedSeries, **flags) -> Outcome:
    return Outcome(S, render.series_payload(S, recognize_rational(S)), **flags)


def _h_zeta(s: Session, cmd: Command) -> Outcome:
    a, b = _args(cmd, 2)[:2]
    X = s.scheme(a)
    return _series_outcome(igusa_zeta_truncated(X, s.system(b), _truncation(s, cmd),
                                                _dim_option(cmd, X)))


def _h_poincare(s: Session, cmd: Command) -> Outcome:
    a, b = _args(cmd, 2)[:2]
    X = s.scheme(a)
    S = poincare_truncated(X, s.system(b), _truncation(s, cmd), _dim_option(cmd, X),
                           s.options.max_depth)
    return _series_outcome(S, stabilized=True)


def _h_autozeta(s: Session, cmd: Command) -> Outcome:
    S = s.system(_args(cmd, 1)[0])
    return _series_outcome(auto_igusa_weightless_truncated(S, _truncation(s, cmd)))


def _h_sigma(s: Session, cmd: Command) -> Outcome:
    ref = _args(cmd, 1)[0]
    value = s._result(ref.name) if s.is_value(ref) else class_of_scheme(s.scheme(ref))
    if isinstance(value, TruncatedSeries):
        return _series_outcome(sigma_series(value), certified=True)
    if isinstance(value, SchemePresentation):
        value = class_of_scheme(value)
    if not isinstance(value, MotivicClass):
        raise TypeError(f"{ref.name} is neither a class, a series nor a scheme")
    image = sigma_reduce(value)
    return Outcome(image, render.class_payload(image), certified=True)


def _h_classof(s: Session, cmd: Command) -> Outcome:
    pos = _args(cmd, 1)
    if len(pos) >= 2:
        value = cone_class(s.scheme(pos[0]), s.scheme(pos[1]))
    else:
        value = class_of_scheme(s.scheme(pos[0]))
    return Outcome(value, render.class_payload(value))


HANDLERS = {
    "arc": _h_arc, "autoarc": _h_arc, "reduce": _h_reduce, "dim": _h_dim, "length": _h_length,
    "simple": _h_simple, "defect": _h_defect, "trace": _h_trace, "probe": _h_probe,
    "measure": _h_measure, "zeta": _h_zeta, "poincare": _h_poincare, "autozeta": _h_autozeta,
    "sigma": _h_sigma, "classof": _h_classof,
}
