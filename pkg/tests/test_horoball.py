from __future__ import annotations

import pytest

from hbl.core import bfs_ball
from hbl.errors import NonGeodesicError, UndeterminedStatus
from hbl.heisenberg import H3, h3_norm
from hbl.horoball import (Ray, Status, WindowSet, busemann_certificate, busemann_window,
                          constant_family, flip_invariant, from_predicate, grazes, h3_box,
                          h3_central_family, h3_columns, indicator, lamp_window, limit_window,
                          max_ca_step, norm_ball_window, predicted_P_h3, predicted_P_lamp,
                          restrict, translate)
from hbl.lamplighter import LAMP, A_NEG, A_POS, B_NEG, lamplighter_horoball_family


def test_box_has_only_group_elements():
    win = h3_box(2, 2, 5)
    assert all(H3.is_element(g) for g in win.elements)
    assert H3.identity() in win


def test_predicates():
    P = predicted_P_h3(h3_box(1, 1, 5))
    assert P[(0, 0, 4)] is Status.OUT and P[(0, 0, -4)] is Status.IN and P[(1, 0, 4)] is Status.IN
    L = predicted_P_lamp(lamp_window(2))
    assert L[((), -1)] is Status.IN and L[((), 0)] is Status.OUT


def test_grazes_examples():
    win = h3_box(3, 1, 3)
    P = indicator(win, [(2, 0, 0)])
    assert grazes(P, (1, 0, 0), H3)
    assert not grazes(P, (0, 0, 0), H3)
    assert grazes(predicted_P_h3(win), H3.identity(), H3)


def test_grazes_needs_visible_determined_neighbours():
    win = h3_box(1, 1, 1)
    with pytest.raises(ValueError):
        grazes(predicted_P_h3(win), (1, 0, 0), H3)
    und = WindowSet(win, {g: Status.UNDETERMINED for g in win.elements})
    with pytest.raises(UndeterminedStatus):
        grazes(und, H3.identity(), H3)


def test_translate():
    win = lamp_window(3)
    P = predicted_P_lamp(win)
    assert translate(P, LAMP.identity(), LAMP).same_as(P)
    a = LAMP.generators[A_POS]
    Q = translate(P, a, LAMP)
    for h in win.elements:
        if Q[h] is not Status.UNDETERMINED:
            assert (Q[h] is Status.IN) == (h[1] < -1)
    back = translate(Q, LAMP.inv(a), LAMP)
    for h in win.elements:
        if back[h] is not Status.UNDETERMINED:
            assert back[h] is P[h]


def test_max_ca_examples():
    win = h3_box(2, 2, 3)
    x = indicator(win, [H3.identity()])
    y = max_ca_step(x, H3)
    assert set(y.members()) == {H3.identity()} | set(H3.moves)
    assert all(g in win for g in y.window.elements)
    z = max_ca_step(indicator(win, []), H3)
    assert z.members() == []


def test_max_ca_lamplighter_ball():
    win = norm_ball_window(LAMP, 6)
    inner = bfs_ball(LAMP, LAMP.identity(), 5).distances
    y = max_ca_step(indicator(win, [g for g, d in inner.items() if d <= 3]), LAMP)
    assert set(y.members()) == {g for g, d in inner.items() if d <= 4}


def test_h3_limit_with_valid_centres():
    win = h3_box(2, 2, 5)
    P, rep = limit_window(H3, lambda N: h3_central_family(N, valid=True), win, range(2, 9))
    assert P.same_as(predicted_P_h3(win)) and rep.stable
    assert flip_invariant(P)


def test_h3_limit_report_fields():
    win = h3_box(2, 2, 5)
    P, rep = limit_window(H3, h3_central_family, win, range(2, 7))
    assert rep.schedule == [2, 3, 4, 5, 6]
    assert rep.onset == 4 and rep.stable and not rep.trivial
    cols = h3_columns(P)
    assert cols[(1, 0)] == (-4, 4)
    assert cols[(0, 0)] == (-4, -2)


def test_h3_central_family_values():
    assert h3_central_family(2) == ((0, 0, -9), h3_norm((0, 0, 9))[0] - 1)
    assert h3_central_family(2, valid=True) == ((0, 0, -10), h3_norm((0, 0, 10))[0] - 1)


def test_lamplighter_limit_window_5():
    win = lamp_window(5)
    P, rep = limit_window(LAMP, lamplighter_horoball_family, win, range(6, 10))
    assert P.same_as(predicted_P_lamp(win)) and rep.changes == []


def test_constant_family_is_trivial():
    win = h3_box(1, 1, 2)
    P, rep = limit_window(H3, constant_family(H3), win, range(3, 8))
    assert P.counts()[Status.IN] == len(win) and rep.trivial


def test_schedule_must_increase():
    with pytest.raises(ValueError):
        limit_window(H3, constant_family(H3), h3_box(1, 1, 1), [3, 2])


def test_busemann_examples():
    east = Ray((), (1,))
    P = busemann_window(H3, east, h3_box(3, 3, 3), 20)
    assert P[(1, 0, 0)] is Status.IN
    assert P[(-1, 0, 0)] is Status.OUT
    cert = busemann_certificate(H3, east, (-1, 0, 0))
    assert cert is not None and cert.deficit == 1
    west = Ray((), (A_NEG,))
    Q = busemann_window(LAMP, west, lamp_window(3), 20)
    assert Q[((1,), -1)] is Status.OUT


def test_busemann_generic_ray_is_undetermined():
    # a non-axis H_3 ray has no certificate, so nothing outside is called OUT
    ray = Ray((), (1, 2))
    P = busemann_window(H3, ray, h3_box(1, 1, 1), 8)
    assert P.counts()[Status.OUT] == 0
    assert P.counts()[Status.UNDETERMINED] > 0


def test_busemann_rejects_non_geodesic():
    with pytest.raises(NonGeodesicError):
        busemann_window(H3, Ray((1,), (3,)), h3_box(1, 1, 1), 5)
    with pytest.raises(NonGeodesicError):
        busemann_window(LAMP, Ray((A_POS, B_NEG, A_POS), (A_NEG,)), lamp_window(1), 5)


@pytest.mark.parametrize("tail", [(B_NEG,), (A_NEG, B_NEG), (A_POS,)])
def test_busemann_out_has_positive_deficit_far_out(tail):
    from hbl.horoball import ray_points
    from hbl.lamplighter import lamp_norm
    ray = Ray((), tail)
    win = lamp_window(2)
    P = busemann_window(LAMP, ray, win, 10)
    pts = ray_points(LAMP, ray, 200)
    for g in win.elements:
        deficits = [lamp_norm(LAMP.mul(LAMP.inv(g), p)) - t for t, p in enumerate(pts)]
        if P[g] is Status.OUT:
            assert min(deficits) > 0
        else:
            assert P[g] is Status.IN and min(deficits) <= 0


def test_restrict_and_csv(tmp_path):
    win = h3_box(2, 2, 5)
    P = predicted_P_h3(win)
    small = h3_box(1, 1, 1)
    R = restrict(P, small)
    assert R.same_as(predicted_P_h3(small))
    P.to_csv(tmp_path / "p.csv", H3)
    rows = (tmp_path / "p.csv").read_text().splitlines()
    assert rows[0] == "element,status" and len(rows) == len(win) + 1


def test_window_set_needs_full_status():
    win = h3_box(1, 1, 1)
    with pytest.raises(ValueError):
        WindowSet(win, {})
    assert from_predicate(win, lambda g: True).counts()[Status.IN] == len(win)


def test_ray_word():
    r = Ray((1,), (2, 3))
    assert r.word(6) == (1, 2, 3, 2, 3, 2)
    with pytest.raises(ValueError):
        Ray((1,), ())
