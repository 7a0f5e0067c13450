from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from hbl import kernels
from hbl.core import bfs_ball
from hbl.heisenberg import H3
from hbl.lamplighter import LAMP


@pytest.mark.parametrize("radius", [0, 1, 5, 9])
def test_h3_ball_backends_agree(radius):
    a = kernels.h3_ball_arrays(radius, "numba")
    b = kernels.h3_ball_arrays(radius, "numpy")
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_h3_ball_matches_bfs():
    elems, dist, nbr = kernels.h3_ball_arrays(8)
    lab = bfs_ball(H3, H3.identity(), 8).distances
    assert len(elems) == len(lab)
    assert all(lab[tuple(int(v) for v in row)] == d for row, d in zip(elems, dist))
    # neighbour columns follow the generator order and point at g*s
    for i in range(0, len(elems), 37):
        g = tuple(int(v) for v in elems[i])
        for j, h in enumerate(H3.neighbors(g)):
            k = nbr[i, j]
            assert (k < 0 and h not in lab) or tuple(int(v) for v in elems[k]) == h
    assert list(np.lexsort((elems[:, 2], elems[:, 1], elems[:, 0], dist))) == list(range(len(dist)))


def test_height_bound_covers_ball():
    for r in (4, 10, 16):
        elems, _, _ = kernels.h3_ball_arrays(r)
        assert np.abs(elems[:, 2]).max() <= kernels.h3_height_bound(r)


@pytest.mark.parametrize("model, radius, n", [(H3, 12, 8), (LAMP, 9, 6)],
                         ids=["h3", "lamplighter"])
def test_shell_backends_agree(model, radius, n):
    if model is H3:
        _, dist, nbr = kernels.h3_ball_arrays(radius)
    else:
        _, dist, nbr = kernels.ball_arrays(model, radius)
    a = kernels.shell_distortion(nbr, dist, n, radius - n, "numba")
    b = kernels.shell_distortion(nbr, dist, n, radius - n, "numpy")
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_shell_requires_margin():
    _, dist, nbr = kernels.h3_ball_arrays(6)
    with pytest.raises(ValueError):
        kernels.shell_distortion(nbr, dist, 5, 3)


def test_masked_bfs():
    elems, dist, nbr = kernels.h3_ball_arrays(4)
    allowed = dist <= 4
    d = kernels.masked_bfs(nbr, allowed, 0)
    assert np.array_equal(d, dist)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.h3_ball_arrays(2, "cuda")


def test_env_flag_selects_numpy():
    env = dict(os.environ, HBL_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", "from hbl import kernels; print(kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["HBL_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", "from hbl import kernels; print(kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"
