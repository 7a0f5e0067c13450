"""Half-space certificates for planar paths, detour censuses and projection checks."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import BallSnapshot, GroupModel, Word


@dataclass(frozen=True)
class HalfspaceCertificate:
    """``u . p(t) >= t * max_s u . s - offset`` for every checked ``t``; ``offset <= max_deficit``."""

    direction: tuple
    offset: Fraction
    max_deficit: Fraction

    def check(self, points: Sequence, gens: Sequence) -> bool:
        u = self.direction
        top = max(_dot(u, s) for s in gens)
        return all(_dot(u, p) >= t * top - self.offset for t, p in enumerate(points))


def _dot(u, v):
    return sum(Fraction(a) * b for a, b in zip(u, v))


def _hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Convex hull vertices, counter-clockwise (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def candidate_directions(gens: Sequence) -> list[tuple[int, int]]:
    """Hull-vertex vectors (by angle from the positive x-axis), then outward edge normals."""
    hull = _hull([tuple(s) for s in gens])
    verts = [v for v in hull if v != (0, 0)]
    verts.sort(key=lambda v: math.atan2(v[1], v[0]) % (2 * math.pi))
    normals = []
    for p, q in zip(hull, hull[1:] + hull[:1]):
        nx, ny = q[1] - p[1], p[0] - q[0]
        g = math.gcd(nx, ny) or 1
        normals.append((nx // g, ny // g))
    out: list[tuple[int, int]] = []
    for u in verts + normals:
        if u != (0, 0) and u not in out:
            out.append(u)
    return out


def halfspace_certificate(points: Sequence, gens: Sequence, k_max=8) -> HalfspaceCertificate | None:
    """Best certificate among the candidate directions, or ``None`` if all exceed ``k_max``."""
    pts = [tuple(p) for p in points]
    if not pts or any(len(p) != 2 for p in pts):
        raise ValueError("points must be a non-empty sequence of planar points")
    if pts[0] != (0, 0):
        raise ValueError("points must start at the origin")
    k_max = Fraction(k_max)
    best = None
    for u in candidate_directions(gens):
        top = max(_dot(u, s) for s in gens)
        deficit = max(t * top - _dot(u, p) for t, p in enumerate(pts))
        if best is None or deficit < best[1]:
            best = (u, deficit)
    if best is None or best[1] > k_max:
        return None
    return HalfspaceCertificate(best[0], best[1], k_max)


def l1_geodesic_words(length: int, quadrant: int) -> np.ndarray:
    """All planar l1-geodesic words of one quadrant as a ``(2**length, length, 2)`` step array.

    Quadrant ``q`` uses the horizontal step ``+-1`` and vertical ``+-1`` with signs
    ``(1,1), (-1,1), (-1,-1), (1,-1)`` in order; bit ``i`` of the index picks
    vertical at position ``i``.
    """
    sx, sy = [(1, 1), (-1, 1), (-1, -1), (1, -1)][quadrant]
    idx = np.arange(1 << length, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(length)) & 1
    steps = np.empty((len(idx), length, 2), np.int8)
    steps[..., 0] = np.where(bits == 0, sx, 0)
    steps[..., 1] = np.where(bits == 1, sy, 0)
    return steps


def batch_min_deficit(steps: np.ndarray, gens: Sequence) -> np.ndarray:
    """Smallest deficit over the candidate directions for many paths at once.

    Integer directions keep the arithmetic exact; int32 is ample for the
    lengths that fit in memory and keeps the batch small.
    """
    paths = np.cumsum(steps, axis=1, dtype=np.int32)
    t = np.arange(1, steps.shape[1] + 1, dtype=np.int32)
    best = None
    for u in candidate_directions(gens):
        top = max(u[0] * s[0] + u[1] * s[1] for s in gens)
        val = t * top - (paths[..., 0] * u[0] + paths[..., 1] * u[1])
        deficit = np.maximum(val.max(axis=1), 0)
        best = deficit if best is None else np.minimum(best, deficit)
    return best


def l1_max_certificate_deficit(length: int) -> int:
    """Largest certified deficit over every l1-geodesic word of the given length."""
    gens = [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)]
    worst = 0
    for q in range(4):
        worst = max(worst, int(batch_min_deficit(l1_geodesic_words(length, q), gens).max()))
    return worst


# -- censuses inside balls -----------------------------------------------------

def _layers(members, src, model: GroupModel) -> dict:
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in model.neighbors(u):
            if v in members and v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def detour_census(ball: BallSnapshot, x, y, model: GroupModel,
                  max_paths: int | None = None) -> tuple[int, list[Word]]:
    """All shortest paths from ``x`` to ``y`` that stay inside ``ball``.

    Paths are move sequences (generator indices); the count is exact even when
    ``max_paths`` truncates the list.
    """
    members = ball.distances
    if x not in members or y not in members:
        raise ValueError("both endpoints must lie in the ball")
    dx = _layers(members, x, model)
    if y not in dx:
        return 0, []
    dy = _layers(members, y, model)
    D = dx[y]
    # count paths by dynamic programming over the geodesic interval
    count = {y: 1}
    order = sorted((v for v in dx if v in dy and dx[v] + dy[v] == D), key=lambda v: -dx[v])
    gens = model.moves
    for v in order:
        if v == y:
            continue
        count[v] = sum(count.get(model.mul(v, s), 0) for s in gens
                       if dx.get(model.mul(v, s)) == dx[v] + 1 and model.mul(v, s) in count)
    total = count.get(x, 0)
    paths: list[Word] = []
    stack = [(x, ())]
    while stack and (max_paths is None or len(paths) < max_paths):
        v, w = stack.pop()
        if v == y:
            paths.append(w)
            continue
        step = []
        for i, s in enumerate(gens, start=1):
            u = model.mul(v, s)
            if count.get(u) and dx.get(u) == dx[v] + 1:
                step.append((u, w + (i,)))
        stack.extend(reversed(step))
    return total, paths


def projection_drop(model: GroupModel, radius: int) -> dict:
    """Longest prefix one must drop from an H_3 geodesic word before its planar
    projection becomes an l1 geodesic, over all geodesic words ending in ``B_radius``.

    A word's projection is l1-geodesic exactly when it avoids some letter of each
    opposite pair, so the drop of a word is one past the last letter whose
    opposite appears later.  The maximum over all words is found on the geodesic
    DAG of the ball from the set of letters reachable after each vertex.
    """
    from .core import bfs_ball
    ball = bfs_ball(model, model.identity(), radius)
    lab = ball.distances
    opposite = {1: 3, 3: 1, 2: 4, 4: 2}
    reach: dict = {}
    worst = 0
    witness = None
    for g in sorted(lab, key=lambda v: -lab[v]):
        mask = 0
        d = lab[g]
        for i, s in enumerate(model.moves, start=1):
            h = model.mul(g, s)
            if lab.get(h) == d + 1:
                mask |= (1 << i) | reach[h]
        reach[g] = mask
    for g in lab:
        d = lab[g]
        for i, s in enumerate(model.moves, start=1):
            h = model.mul(g, s)
            if lab.get(h) == d + 1 and reach[h] >> opposite[i] & 1:
                if d + 1 > worst:
                    worst, witness = d + 1, (g, i)
    return {"radius": radius, "max_drop": worst, "witness": witness}
