"""Connectivity of finite subsets, path metrics inside balls and ball distortion."""

from __future__ import annotations

import csv
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .core import BallSnapshot, GroupModel, bfs_ball, norm as word_norm
from .errors import BudgetExceeded


def _partition(elems: list, pairs_i: list[int], pairs_j: list[int], key) -> list[list]:
    n = len(elems)
    if n == 0:
        return []
    graph = coo_matrix((np.ones(len(pairs_i), np.int8), (pairs_i, pairs_j)), shape=(n, n))
    k, labels = connected_components(graph, directed=False)
    groups: list[list] = [[] for _ in range(k)]
    for g, lab in zip(elems, labels):
        groups[lab].append(g)
    for grp in groups:
        grp.sort(key=key)
    groups.sort(key=lambda grp: key(grp[0]))
    return groups


def components(A: Iterable, model: GroupModel) -> list[list]:
    """S-connected components of ``A`` (lists sorted by the model's sort key)."""
    elems = sorted(set(A), key=model.sort_key)
    index = {g: i for i, g in enumerate(elems)}
    ii, jj = [], []
    for i, g in enumerate(elems):
        for h in model.neighbors(g):
            j = index.get(h)
            if j is not None and j > i:
                ii.append(i)
                jj.append(j)
    return _partition(elems, ii, jj, model.sort_key)


def coarse_components(A: Iterable, t: int, model: GroupModel) -> list[list]:
    """Components of the graph on ``A`` joining ``x, y`` when ``d(x, y) <= t``.

    Neighbours are found as ``x * B_t(e)``, so distances are exact.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    elems = sorted(set(A), key=model.sort_key)
    index = {g: i for i, g in enumerate(elems)}
    offsets = [g for g in bfs_ball(model, model.identity(), t).distances if g != model.identity()]
    ii, jj = [], []
    for i, g in enumerate(elems):
        for s in offsets:
            j = index.get(model.mul(g, s))
            if j is not None and j > i:
                ii.append(i)
                jj.append(j)
    return _partition(elems, ii, jj, model.sort_key)


def _as_member(A):
    if isinstance(A, BallSnapshot):
        return A.distances
    return A if isinstance(A, (set, frozenset, dict)) else set(A)


def intrinsic_distances(A, x, model: GroupModel) -> dict:
    """Path-metric distances from ``x`` to every element of its component in ``A``."""
    members = _as_member(A)
    if x not in members:
        raise ValueError(f"{x!r} is not in the set")
    dist = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in model.neighbors(u):
            if v in members and v not in dist:
                dist[v] = du
                queue.append(v)
    return dist


def intrinsic_distance(A, x, y, model: GroupModel) -> int | float:
    """Shortest path inside ``A`` (as an induced subgraph); ``inf`` across components."""
    members = _as_member(A)
    if x not in members or y not in members:
        raise ValueError("both endpoints must lie in the set")
    if x == y:
        return 0
    dist = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in model.neighbors(u):
            if v in members and v not in dist:
                if v == y:
                    return du
                dist[v] = du
                queue.append(v)
    return math.inf


def distortion(ball: BallSnapshot, ell: int, model: GroupModel) -> tuple[int, tuple | None]:
    """``Delta(ell)`` for the path metric of ``ball`` with a witness pair.

    Candidate pairs are ``(g, g*w)`` with ``|w| <= ell``; anchors whose norm
    plus the pair's norm and distance stay within twice the radius are skipped,
    since a geodesic between them never leaves the ball.
    """
    if ell < 0:
        raise ValueError("ell must be non-negative")
    if ell == 0:
        return 0, None
    n = ball.radius
    table = ball.distances
    e = model.identity()
    if ball.center != e:
        raise ValueError("distortion is defined for balls around the identity")
    best, wit = 0, None
    for a in sorted(table, key=lambda g: (table[g], model.sort_key(g))):
        if table[a] <= n - ell:
            continue
        near = {a: 0}
        layer = [a]
        for d in range(1, ell + 1):
            nxt = []
            for u in layer:
                for v in model.neighbors(u):
                    if v not in near:
                        near[v] = d
                        nxt.append(v)
            layer = nxt
        targets = {v: d for v, d in near.items() if d > 0 and v in table}
        intr = intrinsic_distances(table, a, model)
        for v in sorted(targets, key=model.sort_key):
            if intr[v] > best:
                best, wit = intr[v], (a, v)
    if best < ell:
        # a pair at distance exactly ell exists on any ray leaving the identity
        best = ell
        wit = None
    return best, wit


@dataclass
class DistortionTable:
    """``Delta(ell)`` per ball radius ``n``; ``witnesses[n][ell]`` re-verifies each entry."""

    group_id: str
    ell_max: int
    rows: dict[int, list] = field(default_factory=dict)
    witnesses: dict[int, list] = field(default_factory=dict)
    complete: bool = True

    def row(self, n: int) -> list:
        return self.rows[n]

    def onset(self) -> dict[int, int | None]:
        """For each ``ell``, the smallest ``n`` from which the entry stays constant."""
        ns = sorted(self.rows)
        out: dict[int, int | None] = {}
        for ell in range(self.ell_max + 1):
            if not ns:
                out[ell] = None
                continue
            last = self.rows[ns[-1]][ell]
            start = ns[-1]
            for n in reversed(ns):
                if self.rows[n][ell] != last:
                    break
                start = n
            out[ell] = start
        return out

    def to_csv(self, path: str | Path, encode=str) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "ell", "delta", "witness_a", "witness_b"])
            for n in sorted(self.rows):
                for ell, val in enumerate(self.rows[n]):
                    pair = self.witnesses.get(n, [None] * (ell + 1))[ell]
                    a, b = ("", "") if pair is None else (encode(pair[0]), encode(pair[1]))
                    w.writerow([n, ell, val, a, b])


def distortion_table(model: GroupModel, n_range: Iterable[int], ell_max: int,
                     budget_mb: float | None = None, backend: str | None = None) -> DistortionTable:
    """Distortion rows for balls around the identity.

    H_3 balls come from the dense-grid kernel; other models from a generic BFS
    table.  A budget failure keeps the rows computed so far and clears ``complete``.
    """
    ns = sorted(set(n_range))
    table = DistortionTable(model.group_id, ell_max)
    if not ns:
        return table
    top = ns[-1] + ell_max
    try:
        if model.group_id == "heisenberg(1)":
            elems_arr, dist, nbr = kernels.h3_ball_arrays(top, backend)
            elems = [tuple(int(v) for v in row) for row in elems_arr]
        else:
            elems, dist, nbr = kernels.ball_arrays(model, top, budget_mb=budget_mb)
    except BudgetExceeded:
        table.complete = False
        return table
    for n in ns:
        best, wa, wb = kernels.shell_distortion(nbr, dist, n, ell_max, backend)
        row = [0]
        wits = [None]
        run, run_wit = 0, None
        for ell in range(1, ell_max + 1):
            if best[ell] > run:
                run, run_wit = int(best[ell]), (elems[wa[ell]], elems[wb[ell]])
            if run >= ell:
                row.append(run)
                wits.append(run_wit)
            else:
                row.append(ell)
                wits.append(None)
        table.rows[n] = row
        table.witnesses[n] = wits
    return table


def verify_witness(model: GroupModel, n: int, pair: tuple, value: int) -> bool:
    """Recompute a distortion entry from its witness pair."""
    a, b = pair
    ball = bfs_ball(model, model.identity(), n)
    return (a in ball and b in ball
            and intrinsic_distance(ball, a, b, model) == value)


def word_distance(model: GroupModel, x, y) -> int:
    return word_norm(model, model.mul(model.inv(x), y))
