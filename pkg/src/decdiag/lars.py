"""Labeled abstract rewrite systems: sequences, conversions, peaks, diagrams.

A rewrite sequence is a start object plus a list of (label, target) steps; a
conversion additionally carries a direction flag per step (forward entries are
steps source→target, backward entries are steps target→source).  All values
are immutable; operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from .errors import DecdiagError
from .measures import decreasing, lexmax
from .multiset_order import Label, LabelMultiset, Precedence, mul_less

Obj = str

Step = tuple[Obj, Label, Obj]


class SeqError(DecdiagError):
    """Endpoint mismatch, label mismatch, or index out of range on sequences."""


@dataclass(frozen=True)
class LabeledARS:
    steps: frozenset

    @classmethod
    def of(cls, steps) -> "LabeledARS":
        return cls(frozenset(tuple(s) for s in steps))

    def objects(self) -> frozenset:
        return frozenset(x for (a, _, b) in self.steps for x in (a, b))

    def label_set(self) -> frozenset:
        return frozenset(l for (_, l, _) in self.steps)

    def steps_from(self, a: Obj) -> list:
        return sorted(s for s in self.steps if s[0] == a)


@dataclass(frozen=True)
class UnlabeledARS:
    pairs: frozenset

    @classmethod
    def of(cls, pairs) -> "UnlabeledARS":
        return cls(frozenset(tuple(p) for p in pairs))


@dataclass(frozen=True)
class RewriteSeq:
    start: Obj
    steps: tuple = ()


@dataclass(frozen=True)
class Conversion:
    start: Obj
    steps: tuple = ()  # entries (forward: bool, label, target)


def labels(s: RewriteSeq) -> tuple:
    return tuple(l for (l, _) in s.steps)


def lst(s: RewriteSeq) -> Obj:
    return s.start if not s.steps else s.steps[-1][1]


def step_seq(a: Obj, label: Label, b: Obj) -> RewriteSeq:
    return RewriteSeq(a, ((label, b),))


def is_seq(ars: LabeledARS, s: RewriteSeq) -> bool:
    cur = s.start
    for label, target in s.steps:
        if (cur, label, target) not in ars.steps:
            return False
        cur = target
    return True


def seq_concat(s1: RewriteSeq, s2: RewriteSeq) -> RewriteSeq:
    if lst(s1) != s2.start:
        raise SeqError(f"cannot concatenate: {lst(s1)!r} != {s2.start!r}")
    return RewriteSeq(s1.start, s1.steps + s2.steps)


def seq_split(s: RewriteSeq, i: int) -> tuple[RewriteSeq, RewriteSeq]:
    if not 0 <= i <= len(s.steps):
        raise SeqError(f"split index {i} out of range 0..{len(s.steps)}")
    head = RewriteSeq(s.start, s.steps[:i])
    return head, RewriteSeq(lst(head), s.steps[i:])


def seq_split_by_labels(s: RewriteSeq, sigma1, sigma2) -> tuple[RewriteSeq, RewriteSeq]:
    if labels(s) != tuple(sigma1) + tuple(sigma2):
        raise SeqError(f"labels {labels(s)} do not split as {sigma1} ++ {sigma2}")
    return seq_split(s, len(tuple(sigma1)))


# -- conversions ---------------------------------------------------------------


def conv_lst(c: Conversion) -> Obj:
    return c.start if not c.steps else c.steps[-1][2]


def conv_labels(c: Conversion) -> tuple:
    return tuple(l for (_, l, _) in c.steps)


def is_conv(ars: LabeledARS, c: Conversion) -> bool:
    cur = c.start
    for forward, label, target in c.steps:
        step = (cur, label, target) if forward else (target, label, cur)
        if step not in ars.steps:
            return False
        cur = target
    return True


def conv_concat(c1: Conversion, c2: Conversion) -> Conversion:
    if conv_lst(c1) != c2.start:
        raise SeqError(f"cannot concatenate: {conv_lst(c1)!r} != {c2.start!r}")
    return Conversion(c1.start, c1.steps + c2.steps)


def conv_split(c: Conversion, i: int) -> tuple[Conversion, Conversion]:
    if not 0 <= i <= len(c.steps):
        raise SeqError(f"split index {i} out of range 0..{len(c.steps)}")
    head = Conversion(c.start, c.steps[:i])
    return head, Conversion(conv_lst(head), c.steps[i:])


def conv_mirror(c: Conversion) -> Conversion:
    """Reverse the conversion, flipping every direction flag (same label set)."""
    objs = [c.start] + [t for (_, _, t) in c.steps]
    entries = tuple(
        (not fwd, label, objs[i])
        for i, (fwd, label, _) in reversed(list(enumerate(c.steps)))
    )
    return Conversion(objs[-1], entries)


def seq_to_conv(s: RewriteSeq) -> Conversion:
    return Conversion(s.start, tuple((True, l, t) for (l, t) in s.steps))


# -- peaks and diagrams --------------------------------------------------------


@dataclass(frozen=True)
class Peak:
    """Two co-initial rewrite sequences; ``left`` completes as the diagram top."""

    left: RewriteSeq
    right: RewriteSeq

    def __post_init__(self):
        if self.left.start != self.right.start:
            raise SeqError(
                f"peak sides start at {self.left.start!r} and {self.right.start!r}"
            )


@dataclass(frozen=True)
class Diagram:
    top: RewriteSeq  # τ
    left: RewriteSeq  # σ
    right: RewriteSeq  # σ'
    bottom: RewriteSeq  # τ'


def is_diagram(ars: LabeledARS, d: Diagram) -> bool:
    """Endpoint equations of a diagram plus membership of all four sequences."""
    return (
        d.left.start == d.top.start
        and lst(d.left) == d.bottom.start
        and lst(d.top) == d.right.start
        and lst(d.right) == lst(d.bottom)
        and all(is_seq(ars, s) for s in (d.top, d.left, d.right, d.bottom))
    )


def dd_check(ars: LabeledARS, prec: Precedence, d: Diagram) -> bool:
    """A diagram whose label quadruple is decreasing."""
    return is_diagram(ars, d) and decreasing(
        prec, labels(d.top), labels(d.left), labels(d.right), labels(d.bottom)
    )


def mirror_diagram(d: Diagram) -> Diagram:
    return Diagram(top=d.left, left=d.top, right=d.bottom, bottom=d.right)


def paste_diagrams(prec: Precedence, d1: Diagram, d2: Diagram) -> Diagram:
    """Paste two decreasing diagrams sharing d1.right == d2.left side by side."""
    if d1.right != d2.left:
        raise SeqError("pasted diagrams must share their σ' edge")
    from .measures import paste as paste_labels

    paste_labels(
        prec,
        (labels(d1.top), labels(d1.left), labels(d1.right), labels(d1.bottom)),
        (labels(d2.top), labels(d2.left), labels(d2.right), labels(d2.bottom)),
    )
    return Diagram(
        top=seq_concat(d1.top, d2.top),
        left=d1.left,
        right=d2.right,
        bottom=seq_concat(d1.bottom, d2.bottom),
    )


def paste_diagrams_below(prec: Precedence, d1: Diagram, d2: Diagram) -> Diagram:
    """Mirrored pasting: d2 sits below d1 sharing d1.bottom == d2.top."""
    return mirror_diagram(
        paste_diagrams(prec, mirror_diagram(d1), mirror_diagram(d2))
    )


def peak_measure(prec: Precedence, p: Peak) -> LabelMultiset:
    return lexmax(prec, labels(p.left)) + lexmax(prec, labels(p.right))


def peak_less(prec: Precedence, p1: Peak, p2: Peak) -> bool:
    return mul_less(prec, peak_measure(prec, p1), peak_measure(prec, p2))


def local_peaks(ars: LabeledARS) -> list[Peak]:
    """All ordered pairs of co-initial single steps, including self-peaks."""
    peaks = []
    for a in sorted(ars.objects()):
        outgoing = ars.steps_from(a)
        for s1 in outgoing:
            for s2 in outgoing:
                peaks.append(Peak(step_seq(*s1), step_seq(*s2)))
    return peaks


def unlabel(ars: LabeledARS) -> UnlabeledARS:
    return UnlabeledARS(frozenset((a, b) for (a, _, b) in ars.steps))
