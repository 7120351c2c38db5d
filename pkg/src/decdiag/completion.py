"""Constructive peak completion for locally decreasing labeled ARSs.

``complete_peak`` turns an arbitrary peak into a decreasing diagram given
dd-checked joins for every local peak; ``complete_peak_conv`` does the same
when the local peaks are only closed by conversions of the locally-decreasing
shape, first converting each corner into a valley via ``key1_close`` and
``key2_close``.

The recursion mirrors the inductive proof: split off the first steps of both
sides, look up (or build) the local completion, recurse on the left residue,
paste, recurse on the bottom residue, paste below.  Well-foundedness is not
trusted: every recursive call must strictly decrease the peak measure, and a
fuel cap turns pathological inputs into clean errors instead of divergence.
"""

from __future__ import annotations

import os
from collections import Counter
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Optional

from .errors import DecdiagError
from .lars import (
    Conversion,
    Diagram,
    LabeledARS,
    Peak,
    RewriteSeq,
    Step,
    conv_concat,
    conv_labels,
    conv_lst,
    conv_mirror,
    dd_check,
    is_conv,
    is_seq,
    labels,
    lst,
    paste_diagrams,
    paste_diagrams_below,
    peak_measure,
    seq_concat,
    seq_split,
    seq_split_by_labels,
    seq_to_conv,
    step_seq,
    local_peaks,
)
from .measures import ld_decompose, ld_decompose_seqlabels
from .multiset_order import (
    Label,
    LabelMultiset,
    Precedence,
    downset,
    mul_less,
)

FUEL_ENV_VAR = "DECDIAG_FUEL"


class CompletionError(DecdiagError):
    def __init__(self, message: str, peak: Optional[Peak] = None):
        super().__init__(message)
        self.peak = peak


class MissingJoinError(CompletionError):
    """No local completion entry for a local peak."""


class MeasureNotDecreasing(CompletionError):
    """A recursion step failed to shrink the peak measure (bad precedence or map)."""


class FuelExhausted(CompletionError):
    """The recursion exceeded its fuel cap."""


class InvalidLocalMap(CompletionError):
    """A local completion / conversion map violates its invariant."""


class DownsetViolation(CompletionError):
    """A produced join left its prescribed label down-set."""


@dataclass(frozen=True)
class TraceEvent:
    before: LabelMultiset
    after: LabelMultiset
    rule: str


@dataclass
class CompletionTrace:
    events: list = field(default_factory=list)

    def all_descending(self, prec: Precedence) -> bool:
        return all(mul_less(prec, e.after, e.before) for e in self.events)


def default_fuel(ars: LabeledARS) -> int:
    return max(16, len(ars.objects()) * len(ars.steps) * 16)


def fuel_from_env(ars: LabeledARS) -> int:
    raw = os.environ.get(FUEL_ENV_VAR)
    if raw is not None:
        try:
            return int(raw)
        except ValueError as exc:
            raise DecdiagError(f"{FUEL_ENV_VAR} must be an integer, got {raw!r}") from exc
    return default_fuel(ars)


class LocalCompletionMap:
    """Joins (σ', τ') for every local peak, dd-checked eagerly at construction."""

    def __init__(
        self,
        ars: LabeledARS,
        prec: Precedence,
        entries: Mapping[Peak, tuple[RewriteSeq, RewriteSeq]],
    ):
        for peak, (right, bottom) in entries.items():
            d = Diagram(peak.left, peak.right, right, bottom)
            if not dd_check(ars, prec, d):
                raise InvalidLocalMap(
                    f"entry for local peak at {peak.left.start!r} is not a decreasing diagram",
                    peak=peak,
                )
        missing = [p for p in local_peaks(ars) if p not in entries]
        if missing:
            raise InvalidLocalMap(
                f"no entry for local peak at {missing[0].left.start!r}", peak=missing[0]
            )
        self.ars = ars
        self.prec = prec
        self.entries = dict(entries)

    def __getitem__(self, peak: Peak) -> tuple[RewriteSeq, RewriteSeq]:
        return self.entries[peak]


@dataclass(frozen=True)
class ConvTriple:
    """One side of a conversion-closed corner: a bounded conversion, an
    optional single step, then a conversion inside the joint down-set."""

    head: Conversion
    step: Optional[Step]
    tail: Conversion


@dataclass(frozen=True)
class ConvCorner:
    """Conversion data closing a local peak (locally decreasing shape).

    ``left`` hangs off the α-target (labels of ``head`` inside ↓α, optional
    β-step); ``right`` hangs off the β-target (↓β head, optional α-step); both
    ``tail`` conversions stay inside ↓{α,β} and end at a common object.
    """

    left: ConvTriple
    right: ConvTriple


def _check_triple(
    ars: LabeledARS,
    prec: Precedence,
    triple: ConvTriple,
    origin,
    head_bound: set,
    step_label: Label,
    tail_bound: set,
    side: str,
):
    if triple.head.start != origin:
        raise InvalidLocalMap(f"{side} head must start at {origin!r}")
    if not is_conv(ars, triple.head):
        raise InvalidLocalMap(f"{side} head is not a conversion of the ARS")
    if not set(conv_labels(triple.head)) <= head_bound:
        raise InvalidLocalMap(f"{side} head labels leave their down-set")
    at = conv_lst(triple.head)
    if triple.step is not None:
        a, l, b = triple.step
        if a != at:
            raise InvalidLocalMap(f"{side} step must start at {at!r}")
        if l != step_label:
            raise InvalidLocalMap(f"{side} step must carry label {step_label!r}")
        if (a, l, b) not in ars.steps:
            raise InvalidLocalMap(f"{side} step is not a step of the ARS")
        at = b
    if triple.tail.start != at:
        raise InvalidLocalMap(f"{side} tail must start at {at!r}")
    if not is_conv(ars, triple.tail):
        raise InvalidLocalMap(f"{side} tail is not a conversion of the ARS")
    if not set(conv_labels(triple.tail)) <= tail_bound:
        raise InvalidLocalMap(f"{side} tail labels leave their down-set")


def check_corner(ars: LabeledARS, prec: Precedence, peak: Peak, corner: ConvCorner):
    """Validate one corner against the locally-decreasing conversion shape."""
    if len(peak.left.steps) != 1 or len(peak.right.steps) != 1:
        raise InvalidLocalMap("corner entries must belong to local peaks", peak=peak)
    if not is_seq(ars, peak.left) or not is_seq(ars, peak.right):
        raise InvalidLocalMap("local peak steps are not in the ARS", peak=peak)
    beta = labels(peak.left)[0]
    alpha = labels(peak.right)[0]
    both = downset(prec, {alpha, beta})
    _check_triple(
        ars, prec, corner.left, lst(peak.right), downset(prec, alpha), beta, both, "left"
    )
    _check_triple(
        ars, prec, corner.right, lst(peak.left), downset(prec, beta), alpha, both, "right"
    )
    if conv_lst(corner.left.tail) != conv_lst(corner.right.tail):
        raise InvalidLocalMap("corner sides do not meet", peak=peak)


class LocalConvMap:
    """A conversion-shaped corner for every local peak, validated eagerly."""

    def __init__(
        self, ars: LabeledARS, prec: Precedence, entries: Mapping[Peak, ConvCorner]
    ):
        for peak, corner in entries.items():
            check_corner(ars, prec, peak, corner)
        missing = [p for p in local_peaks(ars) if p not in entries]
        if missing:
            raise InvalidLocalMap(
                f"no corner for local peak at {missing[0].left.start!r}",
                peak=missing[0],
            )
        self.ars = ars
        self.prec = prec
        self.entries = dict(entries)

    @classmethod
    def from_valley_map(cls, lcm: LocalCompletionMap) -> "LocalConvMap":
        entries = {
            peak: corner_from_valley(lcm.prec, peak, right, bottom)
            for peak, (right, bottom) in lcm.entries.items()
        }
        return cls(lcm.ars, lcm.prec, entries)

    def __getitem__(self, peak: Peak) -> ConvCorner:
        return self.entries[peak]


def corner_from_valley(
    prec: Precedence, peak: Peak, right: RewriteSeq, bottom: RewriteSeq
) -> ConvCorner:
    """Embed dd-checked valley joins as a conversion-shaped corner.

    Local decreasingness guarantees both joins decompose into the explicit
    three-segment shape; each segment becomes an all-forward conversion.
    """
    beta = labels(peak.left)[0]
    alpha = labels(peak.right)[0]

    def triple(join: RewriteSeq, a: Label, b: Label) -> ConvTriple:
        dec = ld_decompose(prec, a, b, labels(join))
        s1, rest = seq_split_by_labels(join, dec.sigma1, dec.sigma2 + dec.sigma3)
        s2, s3 = seq_split_by_labels(rest, dec.sigma2, dec.sigma3)
        step = None
        if s2.steps:
            (l, t) = s2.steps[0]
            step = (s2.start, l, t)
        return ConvTriple(seq_to_conv(s1), step, seq_to_conv(s3))

    return ConvCorner(
        left=triple(bottom, beta, alpha), right=triple(right, alpha, beta)
    )


Completer = Callable[[Peak], Diagram]


def key1_close(
    ars: LabeledARS,
    prec: Precedence,
    completer: Completer,
    bound: LabelMultiset,
    conv: Conversion,
) -> tuple[RewriteSeq, RewriteSeq]:
    """Close a conversion inside ↓bound into a valley inside ↓bound.

    Walks the conversion back to front: forward head steps are prepended to
    the valley; a backward head step opens a peak that ``completer`` closes
    into a decreasing diagram, which keeps all labels inside the down-set.
    """
    ds_bound = downset(prec, bound)
    stray = [l for l in conv_labels(conv) if l not in ds_bound]
    if stray:
        raise DownsetViolation(f"conversion label {stray[0]!r} outside the bound")
    objs = [conv.start] + [t for (_, _, t) in conv.steps]
    end = objs[-1]
    s1 = RewriteSeq(end)
    s2 = RewriteSeq(end)
    for i in range(len(conv.steps) - 1, -1, -1):
        forward, label, target = conv.steps[i]
        source = objs[i]
        if forward:
            s1 = seq_concat(step_seq(source, label, target), s1)
        else:
            d = completer(Peak(step_seq(target, label, source), s1))
            s1 = d.right
            s2 = seq_concat(s2, d.bottom)
    for leg in (s1, s2):
        stray = [l for l in labels(leg) if l not in ds_bound]
        if stray:
            raise DownsetViolation(f"valley label {stray[0]!r} outside the bound")
    return s1, s2


@dataclass(frozen=True)
class Key2Closure:
    """Four-segment closing data for a peak (bounded sequence, optional step):
    τ' joins from the step side; σ1·σ2·σ3 joins from the sequence side."""

    sigma1: RewriteSeq
    sigma2: RewriteSeq
    sigma3: RewriteSeq
    tau_prime: RewriteSeq


def key2_close(
    ars: LabeledARS,
    prec: Precedence,
    completer: Completer,
    alpha: Label,
    t: RewriteSeq,
    s: Optional[RewriteSeq],
) -> Key2Closure:
    """Close the peak (t, optional α-step) and shape the joins.

    The completed diagram's σ' side is decomposed by the sequence-label
    generalization of the LD' split; τ' is returned as-is (its down-set bound
    involves the ambient second label, which only the caller knows).
    """
    s_seq = s if s is not None else RewriteSeq(t.start)
    if s_seq.steps and (len(s_seq.steps) != 1 or labels(s_seq)[0] != alpha):
        raise CompletionError(f"s must be a single {alpha!r}-step or absent")
    d = completer(Peak(t, s_seq))
    dec = ld_decompose_seqlabels(prec, alpha, labels(t), labels(d.right))
    s1, rest = seq_split_by_labels(d.right, dec.sigma1, dec.sigma2 + dec.sigma3)
    s2, s3 = seq_split_by_labels(rest, dec.sigma2, dec.sigma3)
    return Key2Closure(s1, s2, s3, d.bottom)


def _complete(
    ars: LabeledARS,
    prec: Precedence,
    resolve_local,
    peak: Peak,
    fuel: Optional[int],
) -> tuple[Diagram, CompletionTrace]:
    trace = CompletionTrace()
    remaining = [fuel if fuel is not None else fuel_from_env(ars)]

    def recurse(p: Peak, parent: LabelMultiset, rule: str) -> Diagram:
        m = peak_measure(prec, p)
        if not mul_less(prec, m, parent):
            raise MeasureNotDecreasing(
                f"peak measure {dict(m)} does not drop below {dict(parent)}", peak=p
            )
        trace.events.append(TraceEvent(parent, m, rule))
        return go(p)

    def go(p: Peak) -> Diagram:
        remaining[0] -= 1
        if remaining[0] < 0:
            raise FuelExhausted("completion fuel exhausted", peak=p)
        if not p.left.steps:
            return Diagram(p.left, p.right, p.right, RewriteSeq(lst(p.right)))
        if not p.right.steps:
            return Diagram(p.left, p.right, RewriteSeq(lst(p.left)), p.left)
        beta_step, upsilon = seq_split(p.left, 1)
        alpha_step, rho = seq_split(p.right, 1)
        measure = peak_measure(prec, p)
        sub = lambda q: recurse(q, measure, "corner")
        kappa, mu = resolve_local(Peak(beta_step, alpha_step), sub)
        d_local = Diagram(beta_step, alpha_step, kappa, mu)
        ih1 = recurse(Peak(upsilon, kappa), measure, "left")
        dih1 = paste_diagrams(prec, d_local, ih1)
        ih2 = recurse(Peak(dih1.bottom, rho), measure, "bottom")
        return paste_diagrams_below(prec, dih1, ih2)

    result = go(peak)
    if not dd_check(ars, prec, result):
        raise CompletionError("completion produced a non-decreasing diagram", peak=peak)
    return result, trace


def complete_peak(
    ars: LabeledARS,
    prec: Precedence,
    lcm: LocalCompletionMap,
    peak: Peak,
    *,
    fuel: Optional[int] = None,
) -> tuple[Diagram, CompletionTrace]:
    """Complete a peak into a decreasing diagram with top = peak.left and
    left = peak.right, using the validated local joins."""

    def resolve(local: Peak, sub) -> tuple[RewriteSeq, RewriteSeq]:
        try:
            return lcm[local]
        except KeyError:
            raise MissingJoinError(
                f"no local completion for peak at {local.left.start!r}", peak=local
            ) from None

    return _complete(ars, prec, resolve, peak, fuel)


def mirror_peak_complete(
    ars: LabeledARS,
    prec: Precedence,
    lcm: LocalCompletionMap,
    peak: Peak,
    *,
    fuel: Optional[int] = None,
) -> tuple[Diagram, CompletionTrace]:
    """Symmetric variant: completes via the swapped orientation and mirrors the
    result back, so the output still has top = peak.left, left = peak.right."""
    from .lars import mirror_diagram

    d, trace = complete_peak(
        ars, prec, lcm, Peak(peak.right, peak.left), fuel=fuel
    )
    return mirror_diagram(d), trace


def complete_peak_conv(
    ars: LabeledARS,
    prec: Precedence,
    lconv: LocalConvMap,
    peak: Peak,
    *,
    fuel: Optional[int] = None,
) -> tuple[Diagram, CompletionTrace]:
    """As ``complete_peak``, but each local corner is first closed from its
    conversion shape into a valley (key1 on the bounded conversations, key2 on
    the optional middle steps, one final key1 over the joint down-set)."""

    def resolve(local: Peak, sub) -> tuple[RewriteSeq, RewriteSeq]:
        try:
            corner = lconv[local]
        except KeyError:
            raise MissingJoinError(
                f"no conversion corner for peak at {local.left.start!r}", peak=local
            ) from None
        return _close_corner(ars, prec, local, corner, sub)

    return _complete(ars, prec, resolve, peak, fuel)


def _close_triple(
    ars: LabeledARS,
    prec: Precedence,
    triple: ConvTriple,
    bound_label: Label,
    step_label: Label,
    sub: Completer,
) -> tuple[RewriteSeq, Conversion]:
    """Flatten one corner side into a forward leg plus a residual conversion
    (inside ↓{bound_label, step_label}) ending where the side's tail begins."""
    v1, v2 = key1_close(ars, prec, sub, Counter({bound_label: 1}), triple.head)
    if triple.step is None:
        return v1, conv_mirror(seq_to_conv(v2))
    a, l, b = triple.step
    k2 = key2_close(ars, prec, sub, step_label, v2, step_seq(a, l, b))
    leg = seq_concat(seq_concat(seq_concat(v1, k2.sigma1), k2.sigma2), k2.sigma3)
    return leg, conv_mirror(seq_to_conv(k2.tau_prime))


def _close_corner(
    ars: LabeledARS,
    prec: Precedence,
    local: Peak,
    corner: ConvCorner,
    sub: Completer,
) -> tuple[RewriteSeq, RewriteSeq]:
    beta = labels(local.left)[0]
    alpha = labels(local.right)[0]
    leg_l, resid_l = _close_triple(ars, prec, corner.left, alpha, beta, sub)
    leg_r, resid_r = _close_triple(ars, prec, corner.right, beta, alpha, sub)
    middle = conv_concat(
        conv_concat(resid_l, corner.left.tail),
        conv_concat(conv_mirror(corner.right.tail), conv_mirror(resid_r)),
    )
    w1, w2 = key1_close(
        ars, prec, sub, Counter((alpha, beta)), middle
    )
    tau_p = seq_concat(leg_l, w1)
    sigma_p = seq_concat(leg_r, w2)
    d = Diagram(local.left, local.right, sigma_p, tau_p)
    if not dd_check(ars, prec, d):
        raise CompletionError(
            "conversion corner did not close into a decreasing diagram", peak=local
        )
    return sigma_p, tau_p
