from __future__ import annotations

import random

import pytest

from prodkit.gallery import (
    ZERO,
    ReducedWord,
    alpha_related,
    beta_related,
    f2_gset,
    gset_product_check,
    hermite_basis,
    in_subgroup,
    is_squarefree,
    nat_mms,
    nat_mms_square,
    parse_word,
    spread,
    squarefree_mul,
    thue_word,
    word_ball,
    zx_invariant_check,
)
from prodkit.generation import bounded_close


# --- nat-mms ---


def test_nat_successor():
    assert nat_mms().apply("s", (5,)) == 6


def test_nat_closure_contains_successor_chain():
    res = bounded_close(nat_mms(), [1], max_rounds=4)
    assert {1, 2, 3, 4, 5} <= set(res.elements)


def test_square_band_invariant_randomized():
    rng = random.Random(97)
    sq = nat_mms_square()
    for _ in range(20):
        Z = [
            (rng.randrange(0, 8), rng.randrange(0, 8))
            for _ in range(rng.randint(1, 4))
        ]
        m = spread(Z)
        res = bounded_close(sq, Z, max_elements=4000, max_rounds=6)
        assert all(abs(x - y) <= m for x, y in res.elements)
        assert (0, m + 1) not in res.elements


# --- free-group G-set ---


def test_reduced_word_rejects_unreduced():
    with pytest.raises(ValueError):
        ReducedWord((1, -1))


def test_word_parse_format_round_trip():
    for text in ("1", "x", "xyX", "YYx", "xyxyxy"):
        assert str(parse_word(text)) == text


def test_free_reduction_cancels_insertions():
    rng = random.Random(41)
    ball = word_ball(3)
    for _ in range(60):
        w = ball[rng.randrange(len(ball))]
        v = ball[rng.randrange(len(ball))]
        k = rng.randint(0, len(w.letters))
        prefix, suffix = ReducedWord(w.letters[:k]), ReducedWord(w.letters[k:])
        assert prefix * (v * v.inverse()) * suffix == w
        assert (w * v) * (v.inverse() * suffix.inverse() * prefix.inverse()) == ReducedWord()


def test_gset_operations():
    C = f2_gset()
    w = parse_word("y")
    assert str(C.apply("f_x", (w,))) == "yx"
    assert str(C.apply("g_x", (C.apply("f_x", (w,)),))) == "y"


def test_alpha_beta_examples():
    assert alpha_related(parse_word("yyx"), parse_word("x"))
    assert beta_related(parse_word("xy"), parse_word("yx"))
    assert not alpha_related(parse_word("x"), parse_word("y"))
    assert not beta_related(parse_word("y"), parse_word("x"))


def test_alpha_beta_are_congruences_sampled():
    C = f2_gset()
    ball = word_ball(3)
    ops = [sym for sym, _ in C.sig.symbols]
    for u in ball:
        assert alpha_related(u, u) and beta_related(u, u)
        for v in ball:
            assert alpha_related(u, v) == alpha_related(v, u)
            assert beta_related(u, v) == beta_related(v, u)
            for sym in ops:
                fu, fv = C.apply(sym, (u,)), C.apply(sym, (v,))
                if alpha_related(u, v):
                    assert alpha_related(fu, fv)
                if beta_related(u, v):
                    assert beta_related(fu, fv)


def test_alpha_transitive_on_ball():
    ball = word_ball(2)
    for u in ball:
        for v in ball:
            for w in ball:
                if alpha_related(u, v) and alpha_related(v, w):
                    assert alpha_related(u, w)


def test_gset_witness_matches_construction():
    # the unique alpha-then-beta witness is y^(yexp(v)-yexp(u)) * u
    ball = word_ball(2)
    for u in ball:
        for v in ball:
            delta = v.y_exponent() - u.y_exponent()
            w = ReducedWord()
            for _ in range(abs(delta)):
                w = w.append(2 if delta > 0 else -2)
            w = w * u
            assert alpha_related(u, w) and beta_related(w, v)


def test_gset_product_check_radius2():
    report = gset_product_check(2)
    assert report.ok
    assert report.meet_pairs_checked == 17 * 17
    assert report.compose_pairs_checked == 5 * 5


def test_gset_reflexive_witness():
    report = gset_product_check(1)
    assert report.ok


# --- square-free words ---


def test_squarefree_examples():
    assert squarefree_mul("ab", "a") == "aba"
    assert squarefree_mul("ab", "ba") == ZERO
    assert squarefree_mul("ab", "ab") == ZERO
    assert squarefree_mul(ZERO, "a") == ZERO
    assert squarefree_mul("a", ZERO) == ZERO


def test_square_of_anything_is_zero():
    for w in ("a", "ab", "abc", "abcba"):
        assert squarefree_mul(w, w) == ZERO


def test_squarefree_rejects_bad_input():
    with pytest.raises(ValueError):
        squarefree_mul("aa", "b")
    with pytest.raises(ValueError):
        squarefree_mul("xy", "a")


def _squarefree_words(max_len):
    words = [""]
    out = []
    for _ in range(max_len):
        words = [w + c for w in words for c in "abc" if is_squarefree(w + c)]
        out.extend(words)
    return out


def test_squarefree_mul_associative_exhaustive():
    words = _squarefree_words(4) + [ZERO]
    assert len(words) == 3 + 6 + 12 + 18 + 1
    for a in words:
        for b in words:
            ab = squarefree_mul(a, b)
            for c in words:
                assert squarefree_mul(ab, c) == squarefree_mul(a, squarefree_mul(b, c))


def test_thue_word_squarefree_all_lengths():
    for n in range(1, 21):
        assert is_squarefree(thue_word(n))


# --- Z^d difference invariant ---


def test_hermite_membership_small():
    basis = hermite_basis([(2, 0), (0, 3)])
    assert in_subgroup((2, 3), basis)
    assert in_subgroup((4, -3), basis)
    assert not in_subgroup((1, 0), basis)
    assert not in_subgroup((0, 1), basis)
    # oracle: brute-force small integer combinations
    members = {
        (2 * i, 3 * j) for i in range(-4, 5) for j in range(-4, 5)
    }
    for x in range(-6, 7):
        for y in range(-6, 7):
            assert in_subgroup((x, y), basis) == ((x, y) in members)


def test_hermite_gcd_collapse():
    basis = hermite_basis([(4,), (6,)])
    assert in_subgroup((2,), basis)
    assert not in_subgroup((1,), basis)


def test_zx_example_antidiagonal():
    report = zx_invariant_check(2, [((1, 0), (0, 1))])
    assert report.basis == ((1, -1),)
    assert report.proper
    assert report.ok


def test_zx_empty_generators():
    report = zx_invariant_check(2, [])
    assert report.basis == ()
    assert report.proper
    assert report.ok  # diagonal stays diagonal


def test_zx_full_subgroup_dimension_one():
    report = zx_invariant_check(1, [((1,), (0,))])
    assert not report.proper
    assert report.ok
