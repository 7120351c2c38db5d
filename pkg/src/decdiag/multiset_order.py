"""Finite multisets of labels, down-sets, and the multiset extension of a strict order.

Labels are interned strings; multisets are ``collections.Counter`` values with
strictly positive counts; label sets are plain ``set``/``frozenset``.  All
operations are pure and never mutate their arguments.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from itertools import combinations_with_replacement

from .errors import DecdiagError

Label = str
LabelMultiset = Counter
LabelSeq = Sequence[str]


class PrecedenceError(DecdiagError):
    """The given label order is cyclic, hence not a strict order."""


class OracleBudgetError(DecdiagError):
    """The one-step-extension search exceeded its budget (oracle-scale misuse)."""


def _transitive_closure(pairs: set[tuple[Label, Label]]) -> set[tuple[Label, Label]]:
    succ: dict[Label, set[Label]] = {}
    for x, y in pairs:
        succ.setdefault(x, set()).add(y)
    closed = set(pairs)
    changed = True
    while changed:
        changed = False
        for x, y in list(closed):
            for z in succ.get(y, ()):
                if (x, z) not in closed:
                    closed.add((x, z))
                    succ.setdefault(x, set()).add(z)
                    changed = True
    return closed


class Precedence:
    """A strict order ``≺`` on labels, stored as the set of (smaller, larger) pairs.

    Construction takes the transitive closure of the input pairs and rejects
    cycles, so irreflexivity and transitivity are invariants of every instance.
    On a finite label set this makes the order well-founded.
    """

    __slots__ = ("pairs", "_below", "_label_set")

    def __init__(self, pairs: Iterable[tuple[Label, Label]] = ()):
        closed = _transitive_closure(set(pairs))
        for x, y in closed:
            if x == y:
                raise PrecedenceError(f"precedence has a cycle through {x!r}")
        self.pairs: frozenset[tuple[Label, Label]] = frozenset(closed)
        below: dict[Label, set[Label]] = {}
        for x, y in closed:
            below.setdefault(y, set()).add(x)
        self._below = {y: frozenset(xs) for y, xs in below.items()}
        self._label_set = frozenset(x for pair in closed for x in pair)

    def less(self, x: Label, y: Label) -> bool:
        return (x, y) in self.pairs

    def below(self, y: Label) -> frozenset:
        """All labels strictly below ``y``."""
        return self._below.get(y, frozenset())

    @property
    def labels(self) -> frozenset:
        return self._label_set

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Precedence) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self.pairs)

    def __repr__(self) -> str:
        body = ", ".join(f"{x}<{y}" for x, y in sorted(self.pairs))
        return f"Precedence({{{body}}})"


def downset(prec: Precedence, s) -> set:
    """Strict order ideal generated by ``s``: every label strictly below some generator.

    ``s`` may be a single label, a label set, a multiset, or a label sequence
    (the latter two generate via their element set).
    """
    if isinstance(s, str):
        gens: Iterable[Label] = (s,)
    elif isinstance(s, Counter):
        gens = s.keys()
    elif isinstance(s, (set, frozenset)):
        gens = s
    else:
        gens = set(s)
    out: set[Label] = set()
    for a in gens:
        out |= prec.below(a)
    return out


def diff_s(m: LabelMultiset, s) -> LabelMultiset:
    """Remove from ``m`` every occurrence of labels in ``s`` (``M -s S``)."""
    return Counter({a: c for a, c in m.items() if a not in s})


def cap_s(m: LabelMultiset, s) -> LabelMultiset:
    """Keep in ``m`` exactly the occurrences of labels in ``s`` (``M ∩s S``)."""
    return Counter({a: c for a, c in m.items() if a in s})


def mul_less(prec: Precedence, m: LabelMultiset, n: LabelMultiset) -> bool:
    """Strict multiset extension of ``prec`` (Dershowitz-Manna).

    Decided by maximal cancellation: strip the pointwise-minimum common part,
    then every leftover element of ``m`` must lie strictly below some leftover
    element of ``n``, and the latter must be nonempty.  Complete for the
    transitive orders that ``Precedence`` guarantees.
    """
    common = m & n
    k = m - common
    j = n - common
    if not j:
        return False
    dj = downset(prec, j)
    return all(x in dj for x in k)


def mul_leq(prec: Precedence, m: LabelMultiset, n: LabelMultiset) -> bool:
    """Reflexive multiset extension: ``m == n`` or ``mul_less``."""
    return m == n or mul_less(prec, m, n)


def mult1_less(prec: Precedence, m: LabelMultiset, n: LabelMultiset) -> bool:
    """One-step multiset extension: ``n`` with one element replaced by finitely
    many strictly smaller ones yields ``m``."""
    for a in n:
        rest = n - Counter({a: 1})
        if rest - m:
            continue
        replaced = m - rest
        if all(prec.less(x, a) for x in replaced):
            return True
    return False


def mult_less(
    prec: Precedence,
    m: LabelMultiset,
    n: LabelMultiset,
    *,
    budget: int = 200_000,
) -> bool:
    """Transitive closure of ``mult1_less``, decided by bounded breadth-first search.

    Intermediate multisets are bounded in size by ``|m| + |n| + 2`` and in
    content by labels at or transitively below ``n``'s elements; any chain
    witnessing ``m ≺mult n`` fits inside those bounds.  Exceeding ``budget``
    explored states raises :class:`OracleBudgetError`.
    """
    allowed = sorted(set(n) | downset(prec, set(n)))
    size_bound = sum(m.values()) + sum(n.values()) + 2

    def canon(c: Counter) -> tuple:
        return tuple(sorted(c.items()))

    target = canon(m)
    seen = {canon(n)}
    frontier = [n]
    explored = 0
    while frontier:
        nxt = []
        for cur in frontier:
            for succ in _mult1_successors(prec, cur, allowed, size_bound):
                key = canon(succ)
                if key == target:
                    return True
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(succ)
                explored += 1
                if explored > budget:
                    raise OracleBudgetError(
                        f"mult search explored more than {budget} multisets"
                    )
        frontier = nxt
    return False


def _mult1_successors(
    prec: Precedence, cur: Counter, allowed: list, size_bound: int
) -> Iterable[Counter]:
    base_size = sum(cur.values()) - 1
    for a in sorted(cur):
        base = cur - Counter({a: 1})
        smaller = [x for x in allowed if prec.less(x, a)]
        room = size_bound - base_size
        for size in range(0, room + 1):
            if size > 0 and not smaller:
                break
            for combo in combinations_with_replacement(smaller, size):
                yield base + Counter(combo)
