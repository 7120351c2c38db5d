import random
from collections import Counter

import pytest

from decdiag import (
    DecompositionError,
    LdPrimeDecomposition,
    PasteError,
    Precedence,
    decreasing,
    decreasing_alt,
    diff_s,
    downset,
    hypothesis_decrease_holds,
    ld_check,
    ld_decompose,
    ld_decompose_seqlabels,
    ld_prime_check,
    lexmax,
    mul_leq,
    paste,
)
from support import LABS, rand_decreasing_quadruple, rand_prec, rand_seq

ABC = Precedence([("c", "b"), ("b", "a")])
EMPTY = Precedence()


def lexmax_recursive(prec, seq):
    # literal transcription of the defining recursion, as an oracle
    seq = tuple(seq)
    if not seq:
        return Counter()
    head, rest = seq[0], seq[1:]
    return Counter({head: 1}) + diff_s(lexmax_recursive(prec, rest), prec.below(head))


class TestLexmax:
    def test_empty(self):
        assert lexmax(ABC, []) == Counter()

    def test_inner_maxima_absorbed(self):
        assert lexmax(ABC, ["a", "b", "c"]) == Counter("a")

    def test_leading_small_label_survives(self):
        assert lexmax(ABC, ["c", "a", "c"]) == Counter("ca")

    def test_matches_recursive_definition(self):
        rng = random.Random(7)
        for _ in range(300):
            prec = rand_prec(rng)
            seq = rand_seq(rng, LABS, 6)
            assert lexmax(prec, seq) == lexmax_recursive(prec, seq)

    def test_lemma_3_2(self):
        rng = random.Random(11)
        for _ in range(300):
            prec = rand_prec(rng)
            sigma = rand_seq(rng, LABS, 5)
            tau = rand_seq(rng, LABS, 5)
            # (1) the measure generates the same down-set as the sequence
            assert downset(prec, lexmax(prec, sigma)) == downset(prec, sigma)
            # (2) measure of a concatenation
            assert lexmax(prec, sigma + tau) == lexmax(prec, sigma) + diff_s(
                lexmax(prec, tau), downset(prec, sigma)
            )

    def test_measure_bounded_by_multiset(self):
        rng = random.Random(13)
        for _ in range(300):
            prec = rand_prec(rng)
            sigma = rand_seq(rng, LABS, 6)
            assert not (lexmax(prec, sigma) - Counter(sigma))


class TestDecreasing:
    def test_all_empty(self):
        assert decreasing(EMPTY, [], [], [], []) is True

    def test_single_smaller_join(self):
        prec = Precedence([("b", "a")])
        assert decreasing(prec, ["b"], ["a"], [], []) is True

    def test_empty_order_repeated_label_fails(self):
        assert decreasing(EMPTY, ["b"], ["a"], ["a", "a"], ["b"]) is False

    def test_alt_same_three_examples(self):
        prec = Precedence([("b", "a")])
        assert decreasing_alt(EMPTY, [], [], [], []) is True
        assert decreasing_alt(prec, ["b"], ["a"], [], []) is True
        assert decreasing_alt(EMPTY, ["b"], ["a"], ["a", "a"], ["b"]) is False

    def test_equivalence_randomized(self):
        rng = random.Random(17)
        for _ in range(400):
            prec = rand_prec(rng)
            quad = tuple(rand_seq(rng, LABS, 4) for _ in range(4))
            assert decreasing(prec, *quad) == decreasing_alt(prec, *quad)


class TestPaste:
    def test_all_empty(self):
        assert paste(EMPTY, ((), (), (), ()), ((), (), (), ())) == ((), (), (), ())

    def test_identity_paste(self):
        prec = Precedence([("b", "a")])
        d1 = (("b",), ("a",), (), ())
        d2 = ((), (), (), ())
        assert paste(prec, d1, d2) == (("b",), ("a",), (), ())

    def test_shared_edge_mismatch(self):
        with pytest.raises(PasteError):
            paste(EMPTY, ((), (), ("a",), ()), ((), (), (), ()))

    def test_not_decreasing_rejected(self):
        with pytest.raises(PasteError):
            paste(EMPTY, (("b",), ("a",), ("a", "a"), ("b",)), (("x",),) * 4)

    def test_paste_preserves_decreasingness(self):
        rng = random.Random(19)
        for _ in range(250):
            prec = rand_prec(rng)
            tau, sigma, sigma_p, tau_p = rand_decreasing_quadruple(rng, prec, LABS)
            # second diagram shares the σ' edge
            for _ in range(40):
                ups = rand_seq(rng, LABS, 3)
                sigma_pp = rand_seq(rng, LABS, 3)
                ups_p = rand_seq(rng, LABS, 3)
                if decreasing(prec, ups, sigma_p, sigma_pp, ups_p):
                    break
            else:
                ups, sigma_pp, ups_p = (), sigma_p, ()
            out = paste(prec, (tau, sigma, sigma_p, tau_p), (ups, sigma_p, sigma_pp, ups_p))
            assert decreasing(prec, *out)

    def test_hypothesis_decrease_examples(self):
        prec = Precedence([("b", "a")])
        assert hypothesis_decrease_holds(prec, ["b"], ["a"], [], []) is True
        assert hypothesis_decrease_holds(EMPTY, ["a"], [], [], []) is True

    def test_hypothesis_decrease_randomized(self):
        rng = random.Random(23)
        for _ in range(250):
            prec = rand_prec(rng)
            tau, sigma, sigma_p, tau_p = rand_decreasing_quadruple(rng, prec, LABS)
            if not tau:
                tau = (rng.choice(LABS),) + tau
                if not decreasing(prec, tau, sigma, sigma_p, tau_p):
                    continue
            ups = rand_seq(rng, LABS, 3)
            assert hypothesis_decrease_holds(prec, tau, sigma, sigma_p, ups)


NEWMAN_PREC = Precedence([("lt", "ls"), ("lu", "ls")])


class TestLdChecks:
    def test_empty_joins(self):
        assert ld_check(EMPTY, "a", "b", [], []) is True

    def test_newman_labels(self):
        assert ld_check(NEWMAN_PREC, "ls", "ls", ["lt"], ["lu"]) is True

    def test_unordered_repeat_fails(self):
        assert ld_check(EMPTY, "a", "b", ["a", "a"], []) is False

    def test_ld_prime_examples(self):
        empty = LdPrimeDecomposition((), (), ())
        assert ld_prime_check(EMPTY, "a", "b", empty) is True
        prec = Precedence([("c", "a"), ("c", "b")])
        dec = LdPrimeDecomposition(("c",), ("a",), ("c",))
        assert ld_prime_check(prec, "a", "b", dec) is True
        bad = LdPrimeDecomposition((), ("b",), ())
        assert ld_prime_check(prec, "a", "b", bad) is False

    def test_sigma2_length_invariant(self):
        with pytest.raises(ValueError):
            LdPrimeDecomposition((), ("a", "a"), ())


class TestLdDecompose:
    def test_empty(self):
        assert ld_decompose(EMPTY, "a", "b", []) == LdPrimeDecomposition((), (), ())

    def test_split_at_alpha(self):
        prec = Precedence([("c", "a"), ("c", "b")])
        dec = ld_decompose(prec, "a", "b", ["c", "a", "c"])
        assert dec == LdPrimeDecomposition(("c",), ("a",), ("c",))

    def test_alpha_absent(self):
        prec = Precedence([("c", "a"), ("c", "b")])
        dec = ld_decompose(prec, "a", "b", ["c", "c"])
        assert dec == LdPrimeDecomposition((), (), ("c", "c"))

    def test_precondition_violation_carries_witness(self):
        with pytest.raises(DecompositionError) as exc:
            ld_decompose(EMPTY, "a", "b", ["a", "a"])
        assert exc.value.witness == Counter("aa")

    def test_seqlabels_specializes(self):
        rng = random.Random(29)
        for _ in range(200):
            prec = rand_prec(rng)
            alpha, beta = rng.choice(LABS), rng.choice(LABS)
            sigma_p = rand_seq(rng, LABS, 5)
            try:
                one = ld_decompose(prec, alpha, beta, sigma_p)
            except DecompositionError:
                with pytest.raises(DecompositionError):
                    ld_decompose_seqlabels(prec, alpha, (beta,), sigma_p)
                continue
            assert one == ld_decompose_seqlabels(prec, alpha, (beta,), sigma_p)

    def test_seqlabels_examples(self):
        assert ld_decompose_seqlabels(EMPTY, "a", (), ["a"]) == LdPrimeDecomposition(
            (), ("a",), ()
        )
        prec = Precedence([("c", "b1"), ("c", "b2"), ("c", "a")])
        dec = ld_decompose_seqlabels(prec, "a", ("b1", "b2"), ["c", "c"])
        # any valid split is fine; the leftmost rule picks the final segment
        assert dec.whole == ("c", "c")
        assert set(dec.sigma1) <= downset(prec, ("b1", "b2"))
        assert set(dec.sigma3) <= downset(prec, ("a", "b1", "b2"))

    def test_round_trip_randomized(self):
        rng = random.Random(31)
        done = 0
        while done < 300:
            prec = rand_prec(rng)
            alpha, beta = rng.choice(LABS), rng.choice(LABS)
            sigma_p = rand_seq(rng, LABS, 5)
            if not mul_leq(
                prec,
                diff_s(lexmax(prec, sigma_p), downset(prec, beta)),
                Counter({alpha: 1}),
            ):
                continue
            dec = ld_decompose(prec, alpha, beta, sigma_p)
            assert dec.whole == tuple(sigma_p)
            assert ld_prime_check(prec, alpha, beta, dec)
            done += 1

    def test_ld_prime_implies_ld_randomized(self):
        rng = random.Random(37)
        for _ in range(300):
            prec = rand_prec(rng)
            alpha, beta = rng.choice(LABS), rng.choice(LABS)
            s1 = tuple(
                rng.choice(sorted(downset(prec, beta)))
                for _ in range(rng.randint(0, 3))
                if downset(prec, beta)
            )
            s2 = (alpha,) if rng.random() < 0.5 else ()
            both = sorted(downset(prec, {alpha, beta}))
            s3 = tuple(rng.choice(both) for _ in range(rng.randint(0, 3)) if both)
            sigma_p = s1 + s2 + s3
            assert mul_leq(
                prec,
                diff_s(lexmax(prec, sigma_p), downset(prec, beta)),
                Counter({alpha: 1}),
            )

    def test_inv_aux_properties(self):
        rng = random.Random(41)
        for _ in range(300):
            prec = rand_prec(rng)
            sigma = rand_seq(rng, LABS, 5)
            s = {l for l in LABS if rng.random() < 0.4}
            t = {l for l in LABS if rng.random() < 0.4}
            # (2) measure support inside a down-set forces the sequence inside it
            ds = downset(prec, s)
            if set(lexmax(prec, sigma)) <= ds:
                assert set(sigma) <= ds
            # (3) monotone collapse
            if s <= downset(prec, t):
                assert downset(prec, s) <= downset(prec, t)

    def test_mul_eq_ds(self):
        rng = random.Random(43)
        for _ in range(300):
            prec = rand_prec(rng)
            from support import rand_multiset

            m = rand_multiset(rng, LABS, 5)
            n = rand_multiset(rng, LABS, 5)
            s = {l for l in LABS if rng.random() < 0.4}
            ds = downset(prec, s)
            if mul_leq(prec, m, n) and set(n) <= ds:
                assert set(m) <= ds
