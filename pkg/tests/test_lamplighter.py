from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hbl.core import bfs_ball, bfs_norm, evaluate_word, is_geodesic_word
from hbl.lamplighter import (LAMP, A_NEG, A_POS, B_NEG, B_POS, g_N, geodesic_lang_prefix_member,
                             head, lamp_inv, lamp_mul, lamp_norm, lamplighter_horoball_family,
                             mirror, window_elements)

words = st.lists(st.integers(1, 4), max_size=16)


def test_action_examples():
    e = LAMP.identity()
    a, b, A, B = (LAMP.generators[i] for i in (A_POS, B_POS, A_NEG, B_NEG))
    assert lamp_mul(a, A) == e
    assert lamp_mul(b, A) == ((1,), 0)
    assert lamp_inv(b) == ((-1,), -1) == B
    assert head(e) == 0 and head(a) == 1
    assert head(evaluate_word(LAMP, LAMP.parse_word("Ba"))) == 0


def test_parse_word_aliases():
    assert LAMP.parse_word("a b^-1 a⁻¹") == (A_POS, B_NEG, A_NEG)
    assert LAMP.parse_word("abAB") == (1, 2, 3, 4)
    with pytest.raises(ValueError):
        LAMP.parse_word("ac")


def test_norm_examples():
    assert lamp_norm(LAMP.identity()) == 0
    assert lamp_norm(((1,), 0)) == 2 == bfs_norm(LAMP, ((1,), 0))
    assert lamp_norm(g_N(2)) == 6


def test_norm_matches_bfs_radius_9():
    ball = bfs_ball(LAMP, LAMP.identity(), 9)
    assert all(lamp_norm(g) == d for g, d in ball.distances.items())


@settings(max_examples=100, deadline=None)
@given(words)
def test_norm_matches_bidirectional_bfs(w):
    g = evaluate_word(LAMP, w)
    assert lamp_norm(g) == bfs_norm(LAMP, g)


@settings(max_examples=200, deadline=None)
@given(words, st.integers(1, 4))
def test_head_is_lipschitz(w, i):
    g = evaluate_word(LAMP, w)
    assert abs(head(LAMP.mul(g, LAMP.generators[i])) - head(g)) <= 1


@settings(max_examples=200, deadline=None)
@given(words)
def test_mirror_is_isometric_automorphism(w):
    from hbl.lamplighter import MIRROR_LETTER
    g = evaluate_word(LAMP, w)
    assert mirror(g) == evaluate_word(LAMP, [MIRROR_LETTER[i] for i in w])
    assert lamp_norm(mirror(g)) == lamp_norm(g)


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_g_N_norm(N):
    assert bfs_norm(LAMP, g_N(N)) == 3 * N


def test_family_examples():
    assert lamplighter_horoball_family(2) == (((-3,), 2), 5)
    assert lamplighter_horoball_family(1) == (((-1,), 1), 2)
    with pytest.raises(ValueError):
        lamplighter_horoball_family(0)


@pytest.mark.parametrize("word, member", [("aab", True), ("a a^-1", False), ("b a^-1 b^-1", True),
                                          ("", True), ("aB", True), ("aBb", False)])
def test_language_examples(word, member):
    assert geodesic_lang_prefix_member(word) is member


def test_language_examples_are_geodesic_where_claimed():
    assert not is_geodesic_word(LAMP, LAMP.parse_word("aA"))
    assert is_geodesic_word(LAMP, LAMP.parse_word("bAB"))


def test_finite_geodesic_word_outside_ray_language():
    # a geodesic word that turns twice: it cannot continue as a geodesic ray
    w = LAMP.parse_word("aabAAABa")
    assert is_geodesic_word(LAMP, w)
    assert not geodesic_lang_prefix_member(w)
    L = len(w)
    assert all(not is_geodesic_word(LAMP, w + (s,) * (L + 1)) for s in (A_POS, A_NEG))


def test_language_prefixes_are_geodesic():
    for L in range(1, 8):
        for w in itertools.product((1, 2, 3, 4), repeat=L):
            if geodesic_lang_prefix_member(w):
                assert lamp_norm(evaluate_word(LAMP, w)) == L


def test_window_elements():
    elems = window_elements(2)
    assert len(elems) == 2 ** 4 * 5
    assert LAMP.identity() in elems
    assert all(-2 <= h <= 2 and all(-3 <= s <= 3 for s in x) for x, h in elems)


def test_encode_decode():
    g = ((-3, 1, 5), -2)
    assert LAMP.encode(g) == "lamps=-3,1,5;head=-2"
    assert LAMP.decode(LAMP.encode(g)) == g
    assert LAMP.decode(LAMP.encode(LAMP.identity())) == LAMP.identity()
    assert not LAMP.is_element(((2,), 0))
