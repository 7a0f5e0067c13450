from __future__ import annotations

import math

import pytest

from oracles import distortion_all_pairs
from hbl.connectivity import (components, coarse_components, distortion, distortion_table,
                              intrinsic_distance, intrinsic_distances, verify_witness,
                              word_distance)
from hbl.core import ZdModel, bfs_ball
from hbl.heisenberg import H3, h3_norm
from hbl.horoball import lamp_window, predicted_P_lamp
from hbl.lamplighter import LAMP, lamp_norm

Z2 = ZdModel(2)


@pytest.fixture(scope="module")
def ball10():
    return bfs_ball(H3, H3.identity(), 10)


def test_component_examples():
    assert len(components(bfs_ball(H3, H3.identity(), 2).distances, H3)) == 1
    assert len(components([H3.identity(), (5, 0, 0)], H3)) == 2
    assert components([], H3) == []


def test_predicted_lamp_set_is_disconnected():
    P = predicted_P_lamp(lamp_window(4))
    assert len(components(P.members(), LAMP)) >= 2


def test_coarse_components():
    ball = bfs_ball(H3, H3.identity(), 5).distances
    assert len(coarse_components(ball, 1, H3)) == 1
    pts = [H3.identity(), (3, 0, 0), (7, 0, 0)]
    assert len(coarse_components(pts, 3, H3)) == 2
    assert len(coarse_components(pts, 4, H3)) == 1
    with pytest.raises(ValueError):
        coarse_components(pts, 0, H3)


@pytest.mark.parametrize("t", [1, 2, 3])
def test_lamp_window5_not_coarsely_connected(t):
    P = predicted_P_lamp(lamp_window(5))
    assert len(coarse_components(P.members(), t, LAMP)) >= 2


def test_coarsening_is_monotone():
    P = predicted_P_lamp(lamp_window(4)).members()
    counts = [len(coarse_components(P, t, LAMP)) for t in (1, 2, 3, 4)]
    assert counts == sorted(counts, reverse=True)


def test_intrinsic_distance_examples(ball10):
    x, y = (0, 4, 24), (0, 6, 24)
    assert intrinsic_distance(ball10, x, y, H3) == 10
    assert (0, 5, 24) not in ball10
    g = (2, 3, 4)
    assert intrinsic_distance(ball10, H3.identity(), g, H3) == h3_norm(g)[0]
    assert intrinsic_distance([H3.identity(), (5, 0, 0)], H3.identity(), (5, 0, 0), H3) == math.inf
    with pytest.raises(ValueError):
        intrinsic_distance(ball10, x, (0, 0, 100), H3)


def test_intrinsic_dominates_word_distance():
    ball = bfs_ball(H3, H3.identity(), 6)
    lab = ball.distances
    x = (3, 2, 4)
    intr = intrinsic_distances(lab, x, H3)
    assert all(d >= word_distance(H3, x, y) for y, d in intr.items())


@pytest.mark.parametrize("model, n, norm", [
    (H3, 4, lambda g: h3_norm(g)[0]),
    (LAMP, 4, lamp_norm),
    (LAMP, 5, lamp_norm),
    (Z2, 5, Z2.norm),
])
def test_distortion_against_all_pairs(model, n, norm):
    ball = bfs_ball(model, model.identity(), n)
    def wd(x, y):
        return norm(model.mul(model.inv(x), y))
    want = [distortion_all_pairs(ball.distances, ell, model.neighbors, wd) for ell in (1, 2, 3)]
    table = distortion_table(model, [n], 3)
    assert table.rows[n][1:] == want
    assert [distortion(ball, ell, model)[0] for ell in (1, 2, 3)] == want


def test_distortion_reference_examples():
    ball = bfs_ball(H3, H3.identity(), 6)
    assert distortion(ball, 0, H3) == (0, None)
    assert distortion(ball, 1, H3)[0] == 1
    val, (a, b) = distortion(ball, 2, H3)
    assert val == 10 and word_distance(H3, a, b) <= 2
    assert intrinsic_distance(ball, a, b, H3) == val


def test_table_invariants_and_witnesses():
    table = distortion_table(H3, range(6, 13), 4)
    for n, row in table.rows.items():
        assert row[0] == 0
        assert all(row[i] <= row[i + 1] for i in range(len(row) - 1))
        assert all(row[ell] >= ell for ell in range(len(row)))
        for ell, pair in enumerate(table.witnesses[n]):
            if pair is not None:
                assert verify_witness(H3, n, pair, row[ell])
                assert word_distance(H3, *pair) <= ell


def test_z2_distortion_is_identity():
    table = distortion_table(Z2, range(1, 11), 5)
    assert all(row == list(range(6)) for row in table.rows.values())


def test_lamplighter_distortion_grows():
    table = distortion_table(LAMP, range(4, 11), 3)
    peaks = [max(table.rows[n]) for n in range(4, 11)]
    assert peaks == sorted(peaks) and peaks[-1] > peaks[0]
    # growth happens every second radius, so the sequence is not strictly increasing
    assert peaks == [6, 10, 10, 14, 14, 18, 18]


def test_empty_range_and_budget(tmp_path):
    table = distortion_table(H3, [], 3)
    assert table.rows == {}
    table.to_csv(tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text() == "n,ell,delta,witness_a,witness_b\n"
    partial = distortion_table(LAMP, [20], 3, budget_mb=1)
    assert not partial.complete


def test_onset_and_csv(tmp_path):
    table = distortion_table(H3, range(8, 13), 3)
    onset = table.onset()
    assert onset[0] == 8 and onset[1] == 8
    table.to_csv(tmp_path / "t.csv", H3.encode)
    rows = (tmp_path / "t.csv").read_text().splitlines()
    assert len(rows) == 1 + 5 * 4
