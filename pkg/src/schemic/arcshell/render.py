"""JSON payloads for engine values, and text/JSON rendering of result records.

Every number in a payload is a decimal string.
"""

from __future__ import annotations

import json
from typing import List, Optional

from ..arckit import SimplicityVerdict, StabilityReport
from ..exactalg import format_polynomial
from ..grotkit import MotivicClass
from ..schemekit import SchemePresentation
from ..serieskit import RationalSeriesForm, TruncatedSeries

NONDETERMINISTIC = ("timing",)


def num(x) -> str:
    if x == float("-inf"):
        return "-inf"
    return str(x)


def presentation_payload(P: SchemePresentation) -> dict:
    G = P.ideal.groebner()
    return {"kind": "presentation", "ring": str(P.ring), "variables": list(P.ring.variables),
            "generators": [format_polynomial(g) for g in G.basis]}


def class_payload(C: MotivicClass) -> dict:
    terms = [{"atom": str(atom), "coeff": num(c), "L_exp": num(e)}
             for (atom, e), c in C.sorted_terms()]
    return {"kind": "class", "text": str(C), "terms": terms}


def form_payload(F: Optional[RationalSeriesForm]):
    if F is None:
        return None
    return {"text": str(F), "k": num(F.k), "q": num(F.q), "b": num(F.b),
            "mu": class_payload(F.mu), "polynomial": [class_payload(c) for c in F.polynomial]}


def series_payload(S: TruncatedSeries, form: Optional[RationalSeriesForm]) -> dict:
    return {"kind": "series", "N": num(S.N),
            "coefficients": [class_payload(c) for c in S.coefficients],
            "closed_form": form_payload(form)}


def verdict_payload(v: SimplicityVerdict) -> dict:
    name = {"Simple": "simple", "NotSimple": "not-simple", "Inconclusive": "inconclusive"}[v.kind]
    return {"kind": "verdict", "verdict": name,
            "affine_dim": None if v.m is None else num(v.m), "witness": v.witness}


def integer_payload(value) -> dict:
    return {"kind": "integer", "value": num(value)}


def report_payload(R: StabilityReport) -> dict:
    return {"kind": "report", "levels": [num(x) for x in R.levels],
            "lengths": [num(x) for x in R.lengths], "dims": [num(x) for x in R.dims],
            "defects": [num(x) for x in R.defects], "evidence": list(R.evidence)}


def deterministic_view(record: dict) -> dict:
    """``record`` without timing and without the cache-hit flag."""
    out = {k: v for k, v in record.items() if k not in NONDETERMINISTIC}
    out["flags"] = {k: v for k, v in record["flags"].items() if k != "cache_hit"}
    return out


def render_json(records: List[dict], single: bool = False) -> bytes:
    doc = records[0] if single else records
    return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _summary(payload: dict) -> str:
    kind = payload["kind"]
    if kind == "presentation":
        gens = ", ".join(payload["generators"])
        return f"{payload['ring']}/({gens})"
    if kind == "class":
        return payload["text"]
    if kind == "integer":
        return payload["value"]
    if kind == "verdict":
        if payload["verdict"] == "simple":
            return f"Simple({payload['affine_dim']})"
        label = "NotSimple" if payload["verdict"] == "not-simple" else "Inconclusive"
        return f"{label}: {payload['witness']}"
    if kind == "series":
        lines = [f"  t^{n}: {c['text']}" for n, c in enumerate(payload["coefficients"], start=1)]
        form = payload["closed_form"]
        lines.append(f"  closed form: {form['text'] if form else 'none found'}")
        return "\n" + "\n".join(lines)
    if kind == "report":
        rows = [f"  level {lv}: length {ln}, dim {d}, defect {df}"
                for lv, ln, d, df in zip(payload["levels"], payload["lengths"],
                                         payload["dims"], payload["defects"])]
        rows += [f"  step {a} -> {b}: {ev}" for a, b, ev in
                 zip(payload["levels"], payload["levels"][1:], payload["evidence"])]
        return "\n" + "\n".join(rows)
    return json.dumps(payload, sort_keys=True)


def render_text(records: List[dict]) -> bytes:
    out = []
    for r in records:
        line = f"{r['ident']}: {_summary(r['payload'])}"
        flags = [k for k in ("certified", "stabilized") if r["flags"].get(k) is not None]
        if flags:
            line += "  [" + ", ".join(f"{k}={'yes' if r['flags'][k] else 'no'}" for k in flags) + "]"
        for note in r["payload"].get("notes", []):
            line += f"\n  note: {note}"
        out.append(line)
    return ("\n".join(out) + "\n").encode("utf-8")
