"""Brute-force oracles and end-to-end checkers.

Joinability and confluence are decided by reachability closure; local
decreasingness is decided by an exhaustive phase-constrained search that is
complete on finite ARSs (each join side walks a bounded-label segment, an
optional single step, then a segment inside the joint down-set, so a visited
set over (object, phase) states terminates the search).
"""

from __future__ import annotations

from itertools import combinations, product
from dataclasses import dataclass, field
from typing import Optional

from .completion import (
    ConvCorner,
    ConvTriple,
    LocalCompletionMap,
    LocalConvMap,
    check_corner,
)
from .errors import DecdiagError
from .lars import (
    Conversion,
    Diagram,
    LabeledARS,
    Peak,
    RewriteSeq,
    Step,
    UnlabeledARS,
    conv_lst,
    dd_check,
    labels,
    local_peaks,
    lst,
    step_seq,
)
from .measures import LdPrimeDecomposition
from .multiset_order import Label, Precedence, downset

DECREASING = "decreasing"
NOT_DECREASING = "not-decreasing"
SEARCH_EXHAUSTED = "search-exhausted"


class CapExceededError(DecdiagError):
    """The label set is too large for exhaustive precedence enumeration."""


class NonTerminatingError(DecdiagError):
    def __init__(self, cycle: list):
        super().__init__(f"ARS does not terminate: cycle {' -> '.join(cycle)}")
        self.cycle = cycle


class NotLocallyConfluentError(DecdiagError):
    def __init__(self, peak: tuple):
        a, b, c = peak
        super().__init__(f"ARS is not locally confluent at {a!r} ({b!r} vs {c!r})")
        self.peak = peak


# -- reachability oracles --------------------------------------------------------


def _successors(ars: UnlabeledARS) -> dict:
    succ: dict[str, set] = {}
    for a, b in ars.pairs:
        succ.setdefault(a, set()).add(b)
    return succ


def _reachable(succ: dict, a: str) -> set:
    seen = {a}
    stack = [a]
    while stack:
        cur = stack.pop()
        for nxt in succ.get(cur, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def joinable_oracle(ars: UnlabeledARS, a: str, b: str) -> bool:
    """Some object is reachable (reflexive-transitively) from both a and b."""
    succ = _successors(ars)
    return bool(_reachable(succ, a) & _reachable(succ, b))


def confluent_oracle(ars: UnlabeledARS) -> bool:
    """For all a →* b and a →* c, b and c are joinable."""
    succ = _successors(ars)
    objects = {x for p in ars.pairs for x in p}
    reach = {x: _reachable(succ, x) for x in objects}
    for a in objects:
        targets = sorted(reach[a])
        for b, c in combinations(targets, 2):
            if not (reach[b] & reach[c]):
                return False
    return True


# -- locally decreasing search ---------------------------------------------------


@dataclass
class PeakReport:
    peak: Peak
    status: str
    joins: Optional[tuple] = None  # valley mode: (σ', τ')
    corner: Optional[ConvCorner] = None  # conversion mode
    decomposition: Optional[tuple] = None  # (σ'-side, τ'-side) LD' splits


@dataclass
class LdReport:
    mode: str
    peaks: list = field(default_factory=list)

    @property
    def all_decreasing(self) -> bool:
        return all(p.status == DECREASING for p in self.peaks)


def _phase_search(
    ars: LabeledARS,
    start: str,
    first_bound: set,
    mid_label: Label,
    last_bound: set,
    conversions: bool,
    max_states: Optional[int],
):
    """All objects reachable by: steps in ``first_bound``, an optional forward
    ``mid_label`` step, then steps in ``last_bound``.  Returns (final objects,
    parent map) or None if ``max_states`` was exceeded."""
    edges: dict[str, list] = {}
    for a, l, b in sorted(ars.steps):
        edges.setdefault(a, []).append((True, l, b))
        if conversions:
            edges.setdefault(b, []).append((False, l, a))

    def moves(obj: str, bound: set):
        for fwd, l, t in edges.get(obj, ()):
            if l in bound:
                yield (fwd, l, t)

    initial = (start, 0)
    parent: dict[tuple, tuple] = {initial: None}
    queue = [initial]
    while queue:
        if max_states is not None and len(parent) > max_states:
            return None
        state = queue.pop(0)
        obj, phase = state
        if phase == 0:
            skip = (obj, 1)
            if skip not in parent:
                parent[skip] = (state, None)
                queue.append(skip)
            for fwd, l, t in moves(obj, first_bound):
                nxt = (t, 0)
                if nxt not in parent:
                    parent[nxt] = (state, (fwd, l, t, 0))
                    queue.append(nxt)
            for fwd, l, t in edges.get(obj, ()):
                if fwd and l == mid_label:
                    nxt = (t, 1)
                    if nxt not in parent:
                        parent[nxt] = (state, (fwd, l, t, 1))
                        queue.append(nxt)
        else:
            for fwd, l, t in moves(obj, last_bound):
                nxt = (t, 1)
                if nxt not in parent:
                    parent[nxt] = (state, (fwd, l, t, 2))
                    queue.append(nxt)
    finals = {obj for (obj, phase) in parent if phase == 1}
    return finals, parent


def _rebuild(parent: dict, start: str, goal: str):
    """Trace parents back from (goal, 1) into the three phase segments."""
    path = []
    state = (goal, 1)
    while parent[state] is not None:
        prev, edge = parent[state]
        path.append((prev[0], edge))
        state = prev
    path.reverse()
    seg1: list = []
    mid = None
    seg3: list = []
    for prev_obj, edge in path:
        if edge is None:
            continue
        fwd, l, t, kind = edge
        if kind == 0:
            seg1.append((fwd, l, t))
        elif kind == 1:
            mid = (prev_obj, l, t)
        else:
            seg3.append((fwd, l, t))
    return seg1, mid, seg3


def _entries_to_seq(start: str, entries: list) -> RewriteSeq:
    return RewriteSeq(start, tuple((l, t) for (_, l, t) in entries))


def _side_to_triple(start: str, seg1, mid, seg3) -> ConvTriple:
    head = Conversion(start, tuple(seg1))
    at = conv_lst(head)
    tail_start = mid[2] if mid else at
    return ConvTriple(head, mid, Conversion(tail_start, tuple(seg3)))


def _search_peak(
    ars: LabeledARS,
    prec: Precedence,
    peak: Peak,
    mode: str,
    max_states: Optional[int],
) -> PeakReport:
    beta = labels(peak.left)[0]
    alpha = labels(peak.right)[0]
    b_t, a_t = lst(peak.left), lst(peak.right)
    both = downset(prec, {alpha, beta})
    conversions = mode == "conversion"
    res_r = _phase_search(
        ars, b_t, downset(prec, beta), alpha, both, conversions, max_states
    )
    res_l = _phase_search(
        ars, a_t, downset(prec, alpha), beta, both, conversions, max_states
    )
    if res_r is None or res_l is None:
        return PeakReport(peak, SEARCH_EXHAUSTED)
    finals_r, parent_r = res_r
    finals_l, parent_l = res_l
    common = finals_r & finals_l
    if not common:
        return PeakReport(peak, NOT_DECREASING)
    goal = min(common)
    seg1r, midr, seg3r = _rebuild(parent_r, b_t, goal)
    seg1l, midl, seg3l = _rebuild(parent_l, a_t, goal)
    dec_r = LdPrimeDecomposition(
        tuple(l for (_, l, _) in seg1r),
        (midr[1],) if midr else (),
        tuple(l for (_, l, _) in seg3r),
    )
    dec_l = LdPrimeDecomposition(
        tuple(l for (_, l, _) in seg1l),
        (midl[1],) if midl else (),
        tuple(l for (_, l, _) in seg3l),
    )
    if conversions:
        corner = ConvCorner(
            left=_side_to_triple(a_t, seg1l, midl, seg3l),
            right=_side_to_triple(b_t, seg1r, midr, seg3r),
        )
        check_corner(ars, prec, peak, corner)
        return PeakReport(peak, DECREASING, corner=corner, decomposition=(dec_r, dec_l))
    sigma_p = _entries_to_seq(b_t, seg1r + ([(True, midr[1], midr[2])] if midr else []) + seg3r)
    tau_p = _entries_to_seq(a_t, seg1l + ([(True, midl[1], midl[2])] if midl else []) + seg3l)
    d = Diagram(peak.left, peak.right, sigma_p, tau_p)
    if not dd_check(ars, prec, d):
        raise AssertionError("search produced a witness that fails dd_check")
    return PeakReport(
        peak, DECREASING, joins=(sigma_p, tau_p), decomposition=(dec_r, dec_l)
    )


def check_locally_decreasing(
    ars: LabeledARS,
    prec: Precedence,
    mode: str = "valley",
    *,
    max_states: Optional[int] = None,
) -> LdReport:
    """Search LD'-shaped joins (or conversion-shaped corners) for every local peak."""
    if mode not in ("valley", "conversion"):
        raise ValueError(f"unknown mode {mode!r}")
    report = LdReport(mode=mode)
    for peak in local_peaks(ars):
        if peak.left == peak.right:
            target = lst(peak.left)
            empty = RewriteSeq(target)
            empty_dec = LdPrimeDecomposition((), (), ())
            if mode == "valley":
                report.peaks.append(
                    PeakReport(
                        peak,
                        DECREASING,
                        joins=(empty, empty),
                        decomposition=(empty_dec, empty_dec),
                    )
                )
            else:
                triple = ConvTriple(Conversion(target), None, Conversion(target))
                report.peaks.append(
                    PeakReport(
                        peak,
                        DECREASING,
                        corner=ConvCorner(triple, triple),
                        decomposition=(empty_dec, empty_dec),
                    )
                )
            continue
        report.peaks.append(_search_peak(ars, prec, peak, mode, max_states))
    return report


def valley_map_from_report(
    ars: LabeledARS, prec: Precedence, report: LdReport
) -> LocalCompletionMap:
    entries = {p.peak: p.joins for p in report.peaks if p.status == DECREASING}
    return LocalCompletionMap(ars, prec, entries)


def conv_map_from_report(
    ars: LabeledARS, prec: Precedence, report: LdReport
) -> LocalConvMap:
    entries = {p.peak: p.corner for p in report.peaks if p.status == DECREASING}
    return LocalConvMap(ars, prec, entries)


# -- precedence search -----------------------------------------------------------


def _strict_orders(labs: list):
    """Every strict partial order on ``labs``, each exactly once, smallest first."""
    pairs = list(combinations(labs, 2))
    for assignment in product((None, "<", ">"), repeat=len(pairs)):
        rel = set()
        for (x, y), direction in zip(pairs, assignment):
            if direction == "<":
                rel.add((x, y))
            elif direction == ">":
                rel.add((y, x))
        succ: dict[str, set] = {}
        for x, y in rel:
            succ.setdefault(x, set()).add(y)
        if all(
            (x, z) in rel for x, y in rel for z in succ.get(y, ())
        ):
            yield rel


def find_precedence(
    ars: LabeledARS, *, cap: int = 5, mode: str = "valley"
) -> Optional[Precedence]:
    """First strict order on the ARS labels making every local peak decreasing."""
    labs = sorted(ars.label_set())
    if len(labs) > cap:
        raise CapExceededError(
            f"{len(labs)} labels exceed the enumeration cap of {cap}"
        )
    for rel in _strict_orders(labs):
        prec = Precedence(rel)
        if check_locally_decreasing(ars, prec, mode).all_decreasing:
            return prec
    return None


# -- Newman source labeling -------------------------------------------------------


def newman_labeling(ars: UnlabeledARS) -> tuple[LabeledARS, Precedence]:
    """Label every step by its source; order objects by proper reachability.

    Requires termination (checked by cycle detection) and local confluence
    (checked by the joinability oracle on all single-step peaks).
    """
    succ = _successors(ars)
    objects = sorted({x for p in ars.pairs for x in p})

    color: dict[str, int] = {}
    stack_path: list = []

    def visit(node: str):
        color[node] = 1
        stack_path.append(node)
        for nxt in sorted(succ.get(node, ())):
            if color.get(nxt) == 1:
                cycle = stack_path[stack_path.index(nxt) :] + [nxt]
                raise NonTerminatingError(cycle)
            if color.get(nxt, 0) == 0:
                visit(nxt)
        stack_path.pop()
        color[node] = 2

    for obj in objects:
        if color.get(obj, 0) == 0:
            visit(obj)

    reach = {x: _reachable(succ, x) for x in objects}
    for a in objects:
        outs = sorted(succ.get(a, ()))
        for b, c in combinations(outs, 2):
            if not (reach[b] & reach[c]):
                raise NotLocallyConfluentError((a, b, c))

    labeled = LabeledARS.of((a, a, b) for (a, b) in ars.pairs)
    pairs = {(y, x) for x in objects for y in reach[x] if y != x}
    return labeled, Precedence(pairs)


# -- certificates ------------------------------------------------------------------


@dataclass
class CertEntry:
    left: Step
    right: Step
    joins: Optional[tuple] = None
    corner: Optional[ConvCorner] = None


@dataclass
class Certificate:
    """Self-contained confluence evidence: labeled ARS, precedence with an
    acyclicity-attesting rank, and per-local-peak joining data."""

    mode: str
    steps: tuple
    prec_pairs: tuple
    rank: dict
    entries: tuple


def _rank_of(prec: Precedence, labs) -> dict:
    rank: dict[str, int] = {}

    def level(x: str) -> int:
        if x not in rank:
            below = prec.below(x)
            rank[x] = 0 if not below else 1 + max(level(y) for y in below)
        return rank[x]

    for x in sorted(labs):
        level(x)
    return rank


def certify(ars: LabeledARS, prec: Precedence, mode: str = "valley") -> Certificate:
    report = check_locally_decreasing(ars, prec, mode)
    if not report.all_decreasing:
        bad = next(p for p in report.peaks if p.status != DECREASING)
        raise DecdiagError(
            f"cannot certify: local peak at {bad.peak.left.start!r} is {bad.status}"
        )
    labs = set(ars.label_set()) | {x for pair in prec.pairs for x in pair}
    entries = []
    for p in report.peaks:
        lstep = (p.peak.left.start, p.peak.left.steps[0][0], p.peak.left.steps[0][1])
        rstep = (p.peak.right.start, p.peak.right.steps[0][0], p.peak.right.steps[0][1])
        entries.append(CertEntry(lstep, rstep, joins=p.joins, corner=p.corner))
    return Certificate(
        mode="valley" if mode == "valley" else "conversion",
        steps=tuple(sorted(ars.steps)),
        prec_pairs=tuple(sorted(prec.pairs)),
        rank=_rank_of(prec, labs),
        entries=tuple(entries),
    )


def certificate_problems(cert: Certificate) -> list:
    """Re-validate a certificate without any search; one message per defect."""
    problems: list[str] = []
    if cert.mode not in ("valley", "conversion"):
        problems.append(f"mode: unknown mode {cert.mode!r}")

    pairs = set(cert.prec_pairs)
    for x, y in sorted(pairs):
        if x == y:
            problems.append(f"precedence: reflexive pair ({x!r}, {y!r})")
        rx, ry = cert.rank.get(x), cert.rank.get(y)
        if rx is None or ry is None:
            problems.append(f"rank: missing rank for pair ({x!r}, {y!r})")
        elif not rx < ry:
            problems.append(f"rank: rank[{x!r}]={rx} not below rank[{y!r}]={ry}")
    succ: dict[str, set] = {}
    for x, y in pairs:
        succ.setdefault(x, set()).add(y)
    for x, y in sorted(pairs):
        for z in sorted(succ.get(y, ())):
            if (x, z) not in pairs:
                problems.append(
                    f"precedence: not transitive, ({x!r},{y!r}),({y!r},{z!r}) without ({x!r},{z!r})"
                )
    if problems:
        return problems

    ars = LabeledARS.of(cert.steps)
    prec = Precedence(pairs)
    expected = set(_local_peak_keys(ars))
    seen = set()
    for i, entry in enumerate(cert.entries):
        key = (tuple(entry.left), tuple(entry.right))
        where = f"entries[{i}]"
        if key in seen:
            problems.append(f"{where}: duplicate entry")
            continue
        seen.add(key)
        if key not in expected:
            problems.append(f"{where}: not a local peak of the ARS")
            continue
        la, ll, lb = entry.left
        ra, rl, rb = entry.right
        peak = Peak(step_seq(la, ll, lb), step_seq(ra, rl, rb))
        if cert.mode == "valley":
            if entry.joins is None:
                problems.append(f"{where}: missing valley joins")
                continue
            sigma_p, tau_p = entry.joins
            if not dd_check(ars, prec, Diagram(peak.left, peak.right, sigma_p, tau_p)):
                problems.append(f"{where}: joins do not form a decreasing diagram")
        else:
            if entry.corner is None:
                problems.append(f"{where}: missing conversion corner")
                continue
            try:
                check_corner(ars, prec, peak, entry.corner)
            except DecdiagError as exc:
                problems.append(f"{where}: {exc}")
    missing = expected - seen
    for key in sorted(missing):
        problems.append(f"entries: no entry for local peak {key}")
    return problems


def _local_peak_keys(ars: LabeledARS) -> list:
    return [
        (
            (p.left.start, p.left.steps[0][0], p.left.steps[0][1]),
            (p.right.start, p.right.steps[0][0], p.right.steps[0][1]),
        )
        for p in local_peaks(ars)
    ]


def verify_certificate(cert: Certificate) -> bool:
    return not certificate_problems(cert)
