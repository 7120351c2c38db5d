"""JSON encoding for reports, diagrams, traces, and certificates.

Output is pretty-printed with sorted keys for diff stability.  Certificates
round-trip: ``certificate_from_json(certificate_to_json(c))`` rebuilds an
equivalent certificate, and decoding errors carry the offending field.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

from .analysis import CertEntry, Certificate, LdReport
from .completion import CompletionTrace, ConvCorner, ConvTriple
from .errors import ParseError
from .lars import Conversion, Diagram, Peak, RewriteSeq
from .multiset_order import Precedence


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def seq_to_json(s: RewriteSeq) -> dict:
    return {"start": s.start, "steps": [[l, t] for (l, t) in s.steps]}


def conv_to_json(c: Conversion) -> dict:
    return {"start": c.start, "steps": [[f, l, t] for (f, l, t) in c.steps]}


def peak_to_json(p: Peak) -> dict:
    return {"left": seq_to_json(p.left), "right": seq_to_json(p.right)}


def diagram_to_json(d: Diagram) -> dict:
    return {
        "top": seq_to_json(d.top),
        "left": seq_to_json(d.left),
        "right": seq_to_json(d.right),
        "bottom": seq_to_json(d.bottom),
    }


def trace_to_json(trace: CompletionTrace) -> dict:
    return {
        "events": [
            {"before": dict(e.before), "after": dict(e.after), "rule": e.rule}
            for e in trace.events
        ]
    }


def triple_to_json(t: ConvTriple) -> dict:
    return {
        "head": conv_to_json(t.head),
        "step": list(t.step) if t.step else None,
        "tail": conv_to_json(t.tail),
    }


def corner_to_json(c: ConvCorner) -> dict:
    return {"left": triple_to_json(c.left), "right": triple_to_json(c.right)}


def report_to_json(report: LdReport) -> dict:
    peaks = []
    for p in report.peaks:
        entry: dict = {"peak": peak_to_json(p.peak), "status": p.status}
        if p.joins is not None:
            entry["joins"] = {
                "right": seq_to_json(p.joins[0]),
                "bottom": seq_to_json(p.joins[1]),
            }
        if p.corner is not None:
            entry["corner"] = corner_to_json(p.corner)
        peaks.append(entry)
    return {
        "mode": report.mode,
        "all_decreasing": report.all_decreasing,
        "peaks": peaks,
    }


def certificate_to_json(cert: Certificate) -> dict:
    entries = []
    for e in cert.entries:
        entry: dict = {"left": list(e.left), "right": list(e.right)}
        if e.joins is not None:
            entry["joins"] = {
                "right": seq_to_json(e.joins[0]),
                "bottom": seq_to_json(e.joins[1]),
            }
        if e.corner is not None:
            entry["corner"] = corner_to_json(e.corner)
        entries.append(entry)
    return {
        "format": "decdiag-certificate",
        "version": 1,
        "mode": cert.mode,
        "ars": {"steps": [list(s) for s in cert.steps]},
        "precedence": [list(p) for p in cert.prec_pairs],
        "rank": dict(cert.rank),
        "peaks": entries,
    }


def _expect(payload: dict, field: str, kind, where: str):
    if not isinstance(payload, dict) or field not in payload:
        raise ParseError(f"certificate: missing field {where}{field}")
    value = payload[field]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(f"certificate: field {where}{field} has the wrong type")
    return value


def _seq_from_json(payload: dict, where: str) -> RewriteSeq:
    start = _expect(payload, "start", str, where)
    steps = _expect(payload, "steps", list, where)
    out = []
    for i, s in enumerate(steps):
        if not (isinstance(s, list) and len(s) == 2 and all(isinstance(x, str) for x in s)):
            raise ParseError(f"certificate: bad step at {where}steps[{i}]")
        out.append((s[0], s[1]))
    return RewriteSeq(start, tuple(out))


def _conv_from_json(payload: dict, where: str) -> Conversion:
    start = _expect(payload, "start", str, where)
    steps = _expect(payload, "steps", list, where)
    out = []
    for i, s in enumerate(steps):
        ok = (
            isinstance(s, list)
            and len(s) == 3
            and isinstance(s[0], bool)
            and all(isinstance(x, str) for x in s[1:])
        )
        if not ok:
            raise ParseError(f"certificate: bad entry at {where}steps[{i}]")
        out.append((s[0], s[1], s[2]))
    return Conversion(start, tuple(out))


def _triple_from_json(payload: dict, where: str) -> ConvTriple:
    head = _conv_from_json(_expect(payload, "head", dict, where), where + "head.")
    tail = _conv_from_json(_expect(payload, "tail", dict, where), where + "tail.")
    raw_step = _expect(payload, "step", None, where)
    step = None
    if raw_step is not None:
        if not (
            isinstance(raw_step, list)
            and len(raw_step) == 3
            and all(isinstance(x, str) for x in raw_step)
        ):
            raise ParseError(f"certificate: bad step at {where}step")
        step = (raw_step[0], raw_step[1], raw_step[2])
    return ConvTriple(head, step, tail)


def _step_triple(raw, where: str) -> tuple:
    if not (isinstance(raw, list) and len(raw) == 3 and all(isinstance(x, str) for x in raw)):
        raise ParseError(f"certificate: bad step triple at {where}")
    return (raw[0], raw[1], raw[2])


def certificate_from_json(payload: dict) -> Certificate:
    if not isinstance(payload, dict):
        raise ParseError("certificate: payload must be an object")
    if payload.get("format") != "decdiag-certificate":
        raise ParseError("certificate: missing or wrong 'format' marker")
    mode = _expect(payload, "mode", str, "")
    ars = _expect(payload, "ars", dict, "")
    raw_steps = _expect(ars, "steps", list, "ars.")
    steps = tuple(
        _step_triple(s, f"ars.steps[{i}]") for i, s in enumerate(raw_steps)
    )
    raw_prec = _expect(payload, "precedence", list, "")
    prec_pairs = []
    for i, p in enumerate(raw_prec):
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p)):
            raise ParseError(f"certificate: bad pair at precedence[{i}]")
        prec_pairs.append((p[0], p[1]))
    rank = _expect(payload, "rank", dict, "")
    for k, v in rank.items():
        if not isinstance(k, str) or not isinstance(v, int):
            raise ParseError(f"certificate: bad rank entry for {k!r}")
    entries = []
    for i, e in enumerate(_expect(payload, "peaks", list, "")):
        where = f"peaks[{i}]."
        left = _step_triple(_expect(e, "left", list, where), where + "left")
        right = _step_triple(_expect(e, "right", list, where), where + "right")
        joins = None
        corner = None
        if "joins" in e and e["joins"] is not None:
            j = e["joins"]
            joins = (
                _seq_from_json(_expect(j, "right", dict, where + "joins."), where + "joins.right."),
                _seq_from_json(_expect(j, "bottom", dict, where + "joins."), where + "joins.bottom."),
            )
        if "corner" in e and e["corner"] is not None:
            c = e["corner"]
            corner = ConvCorner(
                left=_triple_from_json(_expect(c, "left", dict, where + "corner."), where + "corner.left."),
                right=_triple_from_json(_expect(c, "right", dict, where + "corner."), where + "corner.right."),
            )
        entries.append(CertEntry(left, right, joins=joins, corner=corner))
    return Certificate(
        mode=mode,
        steps=steps,
        prec_pairs=tuple(prec_pairs),
        rank=dict(rank),
        entries=tuple(entries),
    )


def precedence_to_json(prec: Precedence) -> list:
    return [list(p) for p in sorted(prec.pairs)]


def load_schema(name: str) -> dict:
    raw = resources.files("decdiag").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(raw)
