"""The lexicographic maximum measure and decreasingness of label quadruples.

A quadruple (τ, σ, σ', τ') is read as the four sides of a diagram: τ on top,
σ on the left, σ' joining from the end of τ, τ' joining from the end of σ.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import DecdiagError
from .multiset_order import (
    Label,
    LabelMultiset,
    LabelSeq,
    Precedence,
    diff_s,
    downset,
    mul_leq,
    mul_less,
)


class PasteError(DecdiagError):
    """Pasting preconditions violated (shared edge mismatch or input not decreasing)."""


class DecompositionError(DecdiagError):
    """The LD side condition does not hold; carries the failing residue as witness."""

    def __init__(self, message: str, witness: LabelMultiset):
        super().__init__(f"{message} (residue {dict(witness)})")
        self.witness = witness


def lexmax(prec: Precedence, seq: LabelSeq) -> LabelMultiset:
    """Lexicographic maximum measure: |[]| = {#}, |α·σ| = {α} + (|σ| -s ↓α).

    Computed as the right fold that the recursion prescribes: each label
    suppresses all strictly smaller labels to its right.
    """
    m: Counter = Counter()
    for a in reversed(tuple(seq)):
        m = Counter({a: 1}) + diff_s(m, prec.below(a))
    return m


def decreasing(
    prec: Precedence, tau: LabelSeq, sigma: LabelSeq, sigma_p: LabelSeq, tau_p: LabelSeq
) -> bool:
    """|στ'| ⪯mul |τ| + |σ| and |τσ'| ⪯mul |τ| + |σ|."""
    bound = lexmax(prec, tau) + lexmax(prec, sigma)
    return mul_leq(prec, lexmax(prec, (*sigma, *tau_p)), bound) and mul_leq(
        prec, lexmax(prec, (*tau, *sigma_p)), bound
    )


def decreasing_alt(
    prec: Precedence, tau: LabelSeq, sigma: LabelSeq, sigma_p: LabelSeq, tau_p: LabelSeq
) -> bool:
    """Equivalent formulation: |τ'| -s ↓σ ⪯mul |τ| and |σ'| -s ↓τ ⪯mul |σ|."""
    return mul_leq(
        prec, diff_s(lexmax(prec, tau_p), downset(prec, sigma)), lexmax(prec, tau)
    ) and mul_leq(
        prec, diff_s(lexmax(prec, sigma_p), downset(prec, tau)), lexmax(prec, sigma)
    )


Quadruple = tuple[tuple, tuple, tuple, tuple]


def paste(prec: Precedence, d1, d2) -> Quadruple:
    """Paste decreasing quadruples (τ,σ,σ',τ') and (υ,σ',σ'',υ') into
    (τυ, σ, σ'', τ'υ').

    Both inputs must be decreasing and share the σ' edge; the result is then
    decreasing as well.
    """
    tau, sigma, sigma_p, tau_p = (tuple(x) for x in d1)
    ups, sigma_p2, sigma_pp, ups_p = (tuple(x) for x in d2)
    if sigma_p != sigma_p2:
        raise PasteError(f"shared edge mismatch: {sigma_p} vs {sigma_p2}")
    if not decreasing(prec, tau, sigma, sigma_p, tau_p):
        raise PasteError("first quadruple is not decreasing")
    if not decreasing(prec, ups, sigma_p, sigma_pp, ups_p):
        raise PasteError("second quadruple is not decreasing")
    return (tau + ups, sigma, sigma_pp, tau_p + ups_p)


def hypothesis_decrease_holds(
    prec: Precedence, tau: LabelSeq, sigma: LabelSeq, sigma_p: LabelSeq, ups: LabelSeq
) -> bool:
    """|σ'| + |υ| ≺mul |σ| + |τυ| — the strict decrease behind the completion
    recursion (requires a decreasing (τ,σ,σ',·) with nonempty τ to be true)."""
    return mul_less(
        prec,
        lexmax(prec, sigma_p) + lexmax(prec, ups),
        lexmax(prec, sigma) + lexmax(prec, (*tau, *ups)),
    )


def ld_check(
    prec: Precedence, alpha: Label, beta: Label, sigma_p: LabelSeq, tau_p: LabelSeq
) -> bool:
    """LD: |σ'| -s ↓β ⪯mul {α} and |τ'| -s ↓α ⪯mul {β}."""
    return mul_leq(
        prec, diff_s(lexmax(prec, sigma_p), downset(prec, beta)), Counter({alpha: 1})
    ) and mul_leq(
        prec, diff_s(lexmax(prec, tau_p), downset(prec, alpha)), Counter({beta: 1})
    )


@dataclass(frozen=True)
class LdPrimeDecomposition:
    """A join split as σ1·σ2·σ3 with σ2 at most one label long."""

    sigma1: tuple[str, ...]
    sigma2: tuple[str, ...]
    sigma3: tuple[str, ...]

    def __post_init__(self):
        if len(self.sigma2) > 1:
            raise ValueError("middle segment holds at most one label")

    @property
    def whole(self) -> tuple[str, ...]:
        return self.sigma1 + self.sigma2 + self.sigma3


def ld_prime_check(
    prec: Precedence, alpha: Label, beta: Label, dec: LdPrimeDecomposition
) -> bool:
    """LD' shape: σ1 ⊆ ↓β, σ2 ⊆ {α} with |σ2| ≤ 1, σ3 ⊆ ↓{α,β}.

    The τ'-side condition is the mirrored call with α and β swapped.
    """
    return (
        set(dec.sigma1) <= downset(prec, beta)
        and len(dec.sigma2) <= 1
        and set(dec.sigma2) <= {alpha}
        and set(dec.sigma3) <= downset(prec, {alpha, beta})
    )


def ld_decompose(
    prec: Precedence, alpha: Label, beta: Label, sigma_p: LabelSeq
) -> LdPrimeDecomposition:
    """Decompose an LD join into LD' shape (requires |σ'| -s ↓β ⪯mul {α})."""
    return ld_decompose_seqlabels(prec, alpha, (beta,), sigma_p)


def ld_decompose_seqlabels(
    prec: Precedence, alpha: Label, tau: LabelSeq, sigma_p: LabelSeq
) -> LdPrimeDecomposition:
    """`ld_decompose` with the single label β generalized to a sequence τ.

    Requires |σ'| -s ↓τ ⪯mul {α}.  If α survives in that residue, σ' splits at
    the leftmost occurrence of α not preceded by anything above α (σ2 = [α]);
    otherwise everything sits in the final segment.  Any valid split satisfies
    the postcondition; this one is the leftmost.
    """
    sigma_p = tuple(sigma_p)
    residue = diff_s(lexmax(prec, sigma_p), downset(prec, tau))
    if not mul_leq(prec, residue, Counter({alpha: 1})):
        raise DecompositionError(
            f"input join is not LD for label {alpha!r}", witness=residue
        )
    if alpha in residue:
        for i, lab in enumerate(sigma_p):
            if lab == alpha and alpha not in downset(prec, sigma_p[:i]):
                return LdPrimeDecomposition(sigma_p[:i], (alpha,), sigma_p[i + 1 :])
        raise AssertionError("unreachable: α in |σ'| guarantees a split position")
    return LdPrimeDecomposition((), (), sigma_p)
