"""Shared test helpers: independent brute-force oracles and random generators.

The oracles here deliberately avoid the decision procedures they are used to
check: the multiset order is decided by exhaustive decomposition search, and
joinability facts are recomputed from raw reachability where needed.
"""

from __future__ import annotations

import random
from collections import Counter
from itertools import combinations

from decdiag import (
    LabeledARS,
    Peak,
    Precedence,
    RewriteSeq,
    UnlabeledARS,
    downset,
)

LABS = ["a", "b", "c", "d", "e", "f"]


def sub_multisets(m: Counter):
    items = sorted(m.items())

    def rec(i):
        if i == len(items):
            yield Counter()
            return
        lab, cnt = items[i]
        for rest in rec(i + 1):
            for k in range(cnt + 1):
                out = Counter(rest)
                if k:
                    out[lab] = k
                yield out

    yield from rec(0)


def mul_less_bruteforce(prec: Precedence, m: Counter, n: Counter) -> bool:
    """Exhaustive search over all decompositions M = I+K, N = I+J."""
    for i in sub_multisets(m & n):
        j = n - i
        k = m - i
        if j and set(k) <= downset(prec, j):
            return True
    return False


def mul_leq_bruteforce(prec: Precedence, m: Counter, n: Counter) -> bool:
    for i in sub_multisets(m & n):
        j = n - i
        k = m - i
        if set(k) <= downset(prec, j):
            return True
    return False


def multisets_upto(labs, size):
    """Every multiset over ``labs`` with at most ``size`` elements."""
    out = [Counter()]
    frontier = [Counter()]
    for _ in range(size):
        nxt = []
        for m in frontier:
            for l in labs:
                c = m + Counter({l: 1})
                nxt.append(c)
        # dedup per layer
        seen = set()
        layer = []
        for c in nxt:
            key = tuple(sorted(c.items()))
            if key not in seen:
                seen.add(key)
                layer.append(c)
        out.extend(layer)
        frontier = layer
    return out


def strict_orders_on(labs):
    """All strict partial orders on ``labs`` (as transitive-closed pair sets)."""
    from itertools import product

    pairs = list(combinations(labs, 2))
    for assignment in product((None, "<", ">"), repeat=len(pairs)):
        rel = set()
        for (x, y), direction in zip(pairs, assignment):
            if direction == "<":
                rel.add((x, y))
            elif direction == ">":
                rel.add((y, x))
        succ = {}
        for x, y in rel:
            succ.setdefault(x, set()).add(y)
        if all((x, z) in rel for x, y in rel for z in succ.get(y, ())):
            yield rel


# -- random generators (seeded random.Random everywhere) ------------------------


def rand_prec(rng: random.Random, labs=None, density: float = 0.4) -> Precedence:
    """A random strict order: orient kept pairs along a random linear order."""
    labs = list(labs if labs is not None else LABS[: rng.randint(1, 6)])
    rng.shuffle(labs)
    pairs = []
    for i in range(len(labs)):
        for j in range(i + 1, len(labs)):
            if rng.random() < density:
                pairs.append((labs[i], labs[j]))
    return Precedence(pairs)


def rand_multiset(rng: random.Random, labs, max_size: int = 8) -> Counter:
    return Counter(rng.choice(labs) for _ in range(rng.randint(0, max_size)))


def rand_labelset(rng: random.Random, labs) -> set:
    return {l for l in labs if rng.random() < 0.4}


def rand_seq(rng: random.Random, labs, max_len: int = 5) -> tuple:
    return tuple(rng.choice(labs) for _ in range(rng.randint(0, max_len)))


def rand_decreasing_quadruple(rng: random.Random, prec: Precedence, labs, max_len=3):
    """Rejection-sample a decreasing quadruple; falls back to a trivially
    decreasing one (σ' = σ, τ' = τ) to keep generation total."""
    from decdiag import decreasing

    for _ in range(60):
        tau = rand_seq(rng, labs, max_len)
        sigma = rand_seq(rng, labs, max_len)
        sigma_p = rand_seq(rng, labs, max_len)
        tau_p = rand_seq(rng, labs, max_len)
        if decreasing(prec, tau, sigma, sigma_p, tau_p):
            return tau, sigma, sigma_p, tau_p
    tau = rand_seq(rng, labs, max_len)
    sigma = rand_seq(rng, labs, max_len)
    return tau, sigma, sigma, tau


def newman_ars():
    """The four-object ARS used throughout: s → t,u (label ls) and t,u → v."""
    ars = LabeledARS.of(
        [("s", "ls", "t"), ("s", "ls", "u"), ("t", "lt", "v"), ("u", "lu", "v")]
    )
    prec = Precedence([("lt", "ls"), ("lu", "ls")])
    return ars, prec


def fork_ars():
    return LabeledARS.of([("a", "l1", "b"), ("a", "l2", "c")])


def rand_lars(
    rng: random.Random,
    max_objects: int = 8,
    max_steps: int = 12,
    max_labels: int = 4,
) -> LabeledARS:
    objs = [f"o{i}" for i in range(rng.randint(1, max_objects))]
    labs = [f"l{i}" for i in range(rng.randint(1, max_labels))]
    steps = set()
    for _ in range(rng.randint(0, max_steps)):
        a, b = rng.choice(objs), rng.choice(objs)
        steps.add((a, rng.choice(labs), b))
    return LabeledARS.of(steps)


def rand_joinable_lars(rng: random.Random, **kw) -> LabeledARS:
    """Random ARS nudged toward confluence: steps flow along an object order
    and extra funnel steps point toward a common sink."""
    max_objects = kw.get("max_objects", 8)
    max_labels = kw.get("max_labels", 4)
    objs = [f"o{i}" for i in range(rng.randint(2, max_objects))]
    labs = [f"l{i}" for i in range(rng.randint(1, max_labels))]
    steps = set()
    for _ in range(rng.randint(1, kw.get("max_steps", 12) - 2)):
        i, j = sorted(rng.sample(range(len(objs)), 2))
        steps.add((objs[i], rng.choice(labs), objs[j]))
    sink = objs[-1]
    for o in objs:
        if o != sink and rng.random() < 0.5:
            steps.add((o, rng.choice(labs), sink))
    return LabeledARS.of(steps)


def rand_terminating_unlabeled(
    rng: random.Random, max_objects: int = 7, max_steps: int = 10
) -> UnlabeledARS:
    """Steps respect a random topological order, so the result terminates."""
    objs = [f"n{i}" for i in range(rng.randint(1, max_objects))]
    pairs = set()
    for _ in range(rng.randint(0, max_steps)):
        if len(objs) < 2:
            break
        i, j = sorted(rng.sample(range(len(objs)), 2))
        pairs.add((objs[i], objs[j]))
    return UnlabeledARS.of(pairs)


def enumerate_peaks(ars: LabeledARS, max_len: int = 2, cap: int = 120) -> list:
    """Deterministic bounded enumeration of co-initial sequence pairs."""
    seqs_from: dict[str, list] = {}
    for a in sorted(ars.objects()):
        acc = [RewriteSeq(a)]
        frontier = [RewriteSeq(a)]
        for _ in range(max_len):
            nxt = []
            for s in frontier:
                end = s.start if not s.steps else s.steps[-1][1]
                for (x, l, y) in ars.steps_from(end):
                    nxt.append(RewriteSeq(a, s.steps + ((l, y),)))
            acc.extend(nxt)
            frontier = nxt
        seqs_from[a] = acc
    peaks = []
    for a in sorted(seqs_from):
        for s1 in seqs_from[a]:
            for s2 in seqs_from[a]:
                peaks.append(Peak(s1, s2))
                if len(peaks) >= cap:
                    return peaks
    return peaks
