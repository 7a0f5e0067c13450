from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from hbl.core import bfs_ball, bfs_norm, evaluate_word
from hbl.lamplighter import LAMP, lamp_norm
from hbl.wreath import (WreathModel, construct_theorem1_instance, find_trim,
                        intrinsic_distance_in_ball, lamp_to_wreath, wreath_to_lamp)

Z2Z = WreathModel()
Z3Z = WreathModel(3)
LAMPSTYLE = WreathModel(2, 1, "lamp")


def test_write_is_an_involution_for_z2():
    w = Z2Z.generators[Z2Z.names.index("w")]
    assert Z2Z.mul(w, w) == Z2Z.identity()


def test_group_ids():
    assert Z2Z.group_id == "wreath(Z2,Z)"
    assert WreathModel(2, 2).group_id == "wreath(Z2,Z2)"
    assert LAMPSTYLE.group_id == "wreath(Z2,Z,lamp)"
    with pytest.raises(ValueError):
        WreathModel(2, 2, "lamp")
    with pytest.raises(ValueError):
        WreathModel(1)


@pytest.mark.parametrize("model, radius", [(Z2Z, 8), (Z3Z, 7), (LAMPSTYLE, 8)],
                         ids=lambda m: getattr(m, "group_id", str(m)))
def test_closed_form_norm_matches_bfs(model, radius):
    ball = bfs_ball(model, model.identity(), radius)
    assert all(model.norm(g) == d for g, d in ball.distances.items())


def test_z2_squared_has_no_closed_form():
    m = WreathModel(2, 2)
    assert m.norm(m.identity()) is None
    g = (((((1, 0), 1),)), (0, 0))
    assert bfs_norm(m, g) == 3


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(1, 4), max_size=14))
def test_lamp_style_is_the_lamplighter(w):
    # a, b, a^-1, b^-1 correspond to t, s, T, S
    letter = {1: LAMPSTYLE.names.index("t"), 2: LAMPSTYLE.names.index("s"),
              3: LAMPSTYLE.names.index("T"), 4: LAMPSTYLE.names.index("S")}
    g = evaluate_word(LAMP, w)
    h = evaluate_word(LAMPSTYLE, [letter[i] for i in w])
    assert lamp_to_wreath(g) == h
    assert wreath_to_lamp(h) == g
    assert LAMPSTYLE.norm(h) == lamp_norm(g)


def test_lit_pair_norm():
    # both lamps need a visit and a write, then the head returns: 4N + 2
    for N in (2, 3, 4):
        inst = construct_theorem1_instance(Z2Z, N)
        assert inst.norm == bfs_norm(Z2Z, inst.g) == 4 * N + 2


def test_instance_shape():
    inst = construct_theorem1_instance(Z2Z, 3)
    assert inst.trim == find_trim(Z2Z, 3) == 1
    assert inst.radius == inst.norm - inst.trim
    assert inst.g1 == ((), -1) and inst.g2 == ((), 1)
    with pytest.raises(ValueError):
        construct_theorem1_instance(Z2Z, 1)


def test_intrinsic_distance_grows():
    vals = []
    for N in (2, 3, 4):
        inst = construct_theorem1_instance(Z2Z, N)
        vals.append(intrinsic_distance_in_ball(Z2Z, inst.g, inst.radius, inst.g1, inst.g2))
    assert vals == [8 * N + 2 for N in (2, 3, 4)]


def test_intrinsic_distance_requires_members():
    inst = construct_theorem1_instance(Z2Z, 2)
    with pytest.raises(ValueError):
        intrinsic_distance_in_ball(Z2Z, inst.g, inst.radius, Z2Z.identity(), ((), 40))


def test_encode_round_trip_z2_squared():
    m = WreathModel(3, 2)
    g = ((((-1, 2), 2), ((0, 0), 1)), (3, -1))
    assert m.decode(m.encode(g)) == g
