"""The `.ars` document format: line-oriented, `#` comments.

    ars <name>
    objects <id>+
    labels <id>+
    prec <l1> < <l2>          # l1 below l2; closure taken, cycles rejected
    step <obj> -> <obj> : <label>

Identifiers must be declared before use; duplicate step lines collapse.
Peak paths for the completion commands alternate objects and labels,
comma-separated: ``s,ls,t,lt,v``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .lars import LabeledARS, Peak, RewriteSeq, UnlabeledARS, is_seq
from .multiset_order import Precedence

_RESERVED = {"<", "->", ":"}


@dataclass(frozen=True)
class ArsDocument:
    name: str
    objects: tuple
    labels: tuple
    prec: tuple  # declared pairs (smaller, larger), before closure
    steps: tuple  # (source, label, target)


@dataclass(frozen=True)
class PeakSpec:
    left: RewriteSeq
    right: RewriteSeq


def _ident(token: str, line: int) -> str:
    if not token or token in _RESERVED:
        raise ParseError(f"expected an identifier, got {token!r}", line)
    return token


def parse_ars(text: str) -> ArsDocument:
    name = None
    objects: list = []
    labels: list = []
    prec_decls: list = []
    steps: list = []
    closed: set = set()

    def add_prec(l1: str, l2: str, line: int):
        if l1 == l2 or (l2, l1) in closed:
            raise ParseError(f"cycle in precedence involving {l1!r} and {l2!r}", line)
        lows = {l1} | {x for (x, y) in closed if y == l1}
        highs = {l2} | {y for (x, y) in closed if x == l2}
        closed.update((x, y) for x in lows for y in highs)
        for x in lows:
            for y in highs:
                if x == y:
                    raise ParseError(
                        f"cycle in precedence involving {x!r}", line
                    )

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.split()
        directive, rest = tokens[0], tokens[1:]
        if directive == "ars":
            if len(rest) != 1:
                raise ParseError("expected: ars <name>", lineno)
            if name is not None:
                raise ParseError("duplicate ars line", lineno)
            name = _ident(rest[0], lineno)
        elif directive == "objects":
            if not rest:
                raise ParseError("expected: objects <id>+", lineno)
            for tok in rest:
                obj = _ident(tok, lineno)
                if obj not in objects:
                    objects.append(obj)
        elif directive == "labels":
            if not rest:
                raise ParseError("expected: labels <id>+", lineno)
            for tok in rest:
                lab = _ident(tok, lineno)
                if lab not in labels:
                    labels.append(lab)
        elif directive == "prec":
            if len(rest) != 3 or rest[1] != "<":
                raise ParseError("expected: prec <l1> < <l2>", lineno)
            l1, l2 = _ident(rest[0], lineno), _ident(rest[2], lineno)
            for l in (l1, l2):
                if l not in labels:
                    raise ParseError(f"unknown label {l!r}", lineno)
            add_prec(l1, l2, lineno)
            if (l1, l2) not in prec_decls:
                prec_decls.append((l1, l2))
        elif directive == "step":
            if len(rest) != 5 or rest[1] != "->" or rest[3] != ":":
                raise ParseError("expected: step <obj> -> <obj> : <label>", lineno)
            src, tgt = _ident(rest[0], lineno), _ident(rest[2], lineno)
            lab = _ident(rest[4], lineno)
            for o in (src, tgt):
                if o not in objects:
                    raise ParseError(f"unknown object {o!r}", lineno)
            if lab not in labels:
                raise ParseError(f"unknown label {lab!r}", lineno)
            if (src, lab, tgt) not in steps:
                steps.append((src, lab, tgt))
        else:
            raise ParseError(f"unknown directive {directive!r}", lineno)
    if name is None:
        raise ParseError("missing 'ars <name>' line")
    return ArsDocument(
        name=name,
        objects=tuple(objects),
        labels=tuple(labels),
        prec=tuple(prec_decls),
        steps=tuple(steps),
    )


def format_ars(doc: ArsDocument) -> str:
    lines = [f"ars {doc.name}"]
    if doc.objects:
        lines.append("objects " + " ".join(sorted(doc.objects)))
    if doc.labels:
        lines.append("labels " + " ".join(sorted(doc.labels)))
    for l1, l2 in sorted(doc.prec):
        lines.append(f"prec {l1} < {l2}")
    for src, lab, tgt in sorted(doc.steps):
        lines.append(f"step {src} -> {tgt} : {lab}")
    return "\n".join(lines) + "\n"


def doc_to_lars(doc: ArsDocument) -> tuple[LabeledARS, Precedence]:
    return LabeledARS.of(doc.steps), Precedence(doc.prec)


def doc_to_unlabeled(doc: ArsDocument) -> UnlabeledARS:
    return UnlabeledARS.of((a, b) for (a, _, b) in doc.steps)


def parse_path(text: str, doc: ArsDocument, ars: LabeledARS) -> RewriteSeq:
    """An alternating object/label path like ``s,ls,t,lt,v``."""
    tokens = [t.strip() for t in text.split(",")]
    if not tokens or any(not t for t in tokens) or len(tokens) % 2 == 0:
        raise ParseError(
            f"path {text!r} must alternate objects and labels, starting and ending at an object"
        )
    for i, tok in enumerate(tokens):
        pool = doc.objects if i % 2 == 0 else doc.labels
        kind = "object" if i % 2 == 0 else "label"
        if tok not in pool:
            raise ParseError(f"unknown {kind} {tok!r} in path {text!r}")
    seq = RewriteSeq(
        tokens[0],
        tuple((tokens[i], tokens[i + 1]) for i in range(1, len(tokens), 2)),
    )
    if not is_seq(ars, seq):
        raise ParseError(f"path {text!r} is not a rewrite sequence of the ARS")
    return seq


def parse_peak_spec(left: str, right: str, doc: ArsDocument, ars: LabeledARS) -> PeakSpec:
    ls = parse_path(left, doc, ars)
    rs = parse_path(right, doc, ars)
    if ls.start != rs.start:
        raise ParseError(
            f"peak sides must be co-initial, got {ls.start!r} and {rs.start!r}"
        )
    return PeakSpec(ls, rs)


def peak_of(spec: PeakSpec) -> Peak:
    return Peak(spec.left, spec.right)
