"""Array kernels for ball construction and ball distortion.

Two interchangeable backends: numba-compiled loops and a pure numpy
implementation.  Set ``HBL_NUMBA=0`` to force numpy; numba is also skipped when
it cannot be imported.  Both backends return identical arrays.

Balls are handled as flat arrays: ``elems`` (one row per element), ``dist``
(BFS distance from the identity) and ``nbr`` (index of ``g*s`` for each
non-identity generator, ``-1`` when outside the table).  Rows are sorted by
``(dist, coordinates)``.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba as nb
except ImportError:  # pragma: no cover
    nb = None

USE_NUMBA = nb is not None and os.environ.get("HBL_NUMBA", "1") != "0"


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _pick(name: str | None) -> str:
    if name is None:
        return backend()
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and nb is None:
        raise RuntimeError("numba is not installed")
    return name


def h3_height_bound(radius: int) -> int:
    """A bound on ``|c|`` over ``B_radius(e)`` in H_3 (the true maximum is about r^2/8)."""
    return radius * radius // 4 + radius + 2


# -- H_3 ball -------------------------------------------------------------------

def _h3_bfs_numba_impl(radius, cmax):
    W = 2 * radius + 1
    H = 2 * cmax + 1
    grid = np.full(W * W * H, -1, np.int64)
    cap = 1024
    qa = np.empty(cap, np.int64)
    qb = np.empty(cap, np.int64)
    qc = np.empty(cap, np.int64)
    qd = np.empty(cap, np.int64)
    qa[0] = 0
    qb[0] = 0
    qc[0] = 0
    qd[0] = 0
    grid[(radius * W + radius) * H + cmax] = 0
    head = 0
    tail = 1
    da = np.array([1, 0, -1, 0])
    db = np.array([0, 1, 0, -1])
    while head < tail:
        a = qa[head]
        b = qb[head]
        c = qc[head]
        d = qd[head]
        head += 1
        if d == radius:
            continue
        for k in range(4):
            na = a + da[k]
            nb_ = b + db[k]
            nc = c + a * db[k] - da[k] * b
            key = ((na + radius) * W + (nb_ + radius)) * H + (nc + cmax)
            if grid[key] >= 0:
                continue
            grid[key] = tail
            if tail == cap:
                cap *= 2
                qa2 = np.empty(cap, np.int64)
                qb2 = np.empty(cap, np.int64)
                qc2 = np.empty(cap, np.int64)
                qd2 = np.empty(cap, np.int64)
                qa2[:tail] = qa[:tail]
                qb2[:tail] = qb[:tail]
                qc2[:tail] = qc[:tail]
                qd2[:tail] = qd[:tail]
                qa, qb, qc, qd = qa2, qb2, qc2, qd2
            qa[tail] = na
            qb[tail] = nb_
            qc[tail] = nc
            qd[tail] = d + 1
            tail += 1
    elems = np.empty((tail, 3), np.int64)
    elems[:, 0] = qa[:tail]
    elems[:, 1] = qb[:tail]
    elems[:, 2] = qc[:tail]
    return elems, qd[:tail].copy()


if nb is not None:
    _h3_bfs_numba = nb.njit(cache=True)(_h3_bfs_numba_impl)


def _h3_neighbors(elems: np.ndarray) -> list[np.ndarray]:
    a, b, c = elems[:, 0], elems[:, 1], elems[:, 2]
    return [
        np.stack([a + 1, b, c - b], axis=1),
        np.stack([a, b + 1, c + a], axis=1),
        np.stack([a - 1, b, c + b], axis=1),
        np.stack([a, b - 1, c - a], axis=1),
    ]


def _h3_bfs_numpy(radius: int, cmax: int) -> tuple[np.ndarray, np.ndarray]:
    W = 2 * radius + 1
    H = 2 * cmax + 1

    def keys(e):
        return ((e[:, 0] + radius) * W + (e[:, 1] + radius)) * H + (e[:, 2] + cmax)

    frontier = np.zeros((1, 3), np.int64)
    seen = keys(frontier)
    layers = [frontier]
    for _ in range(radius):
        cand = np.concatenate(_h3_neighbors(frontier))
        k, first = np.unique(keys(cand), return_index=True)
        fresh = ~np.isin(k, seen, assume_unique=True)
        frontier = cand[first[fresh]]
        seen = np.union1d(seen, k[fresh])
        layers.append(frontier)
        if len(frontier) == 0:
            break
    elems = np.concatenate(layers)
    dist = np.concatenate([np.full(len(x), i, np.int64) for i, x in enumerate(layers)])
    return elems, dist


def _sort_and_link(elems: np.ndarray, dist: np.ndarray, radius: int, cmax: int):
    order = np.lexsort((elems[:, 2], elems[:, 1], elems[:, 0], dist))
    elems = elems[order]
    dist = dist[order].astype(np.int32)
    W = 2 * radius + 1
    H = 2 * cmax + 1

    def keys(e):
        return ((e[:, 0] + radius) * W + (e[:, 1] + radius)) * H + (e[:, 2] + cmax)

    k = keys(elems)
    sorter = np.argsort(k, kind="stable")
    ks = k[sorter]
    nbr = np.full((len(elems), 4), -1, np.int32)
    for j, nb_e in enumerate(_h3_neighbors(elems)):
        inside = (np.abs(nb_e[:, 0]) <= radius) & (np.abs(nb_e[:, 1]) <= radius) & (np.abs(nb_e[:, 2]) <= cmax)
        kk = keys(np.where(inside[:, None], nb_e, 0))
        pos = np.searchsorted(ks, kk)
        pos = np.minimum(pos, len(ks) - 1)
        hit = inside & (ks[pos] == kk)
        nbr[hit, j] = sorter[pos[hit]]
    return elems, dist, nbr


def h3_ball_arrays(radius: int, backend_name: str | None = None):
    """``B_radius(e)`` in H_3 as ``(elems, dist, nbr)`` arrays.

    ``nbr`` columns follow the generator order ``R, U, L, D``.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    cmax = h3_height_bound(radius)
    if _pick(backend_name) == "numba":
        elems, dist = _h3_bfs_numba(radius, cmax)
    else:
        elems, dist = _h3_bfs_numpy(radius, cmax)
    return _sort_and_link(elems, dist, radius, cmax)


def ball_arrays(model, radius: int, budget_mb: float | None = None):
    """Generic ``(elems, dist, nbr)`` for any model; ``elems`` is a Python list."""
    from .core import bfs_ball
    ball = bfs_ball(model, model.identity(), radius, budget_mb=budget_mb)
    items = sorted(ball.distances.items(), key=lambda kv: (kv[1], model.sort_key(kv[0])))
    elems = [g for g, _ in items]
    index = {g: i for i, g in enumerate(elems)}
    dist = np.array([d for _, d in items], np.int32)
    nbr = np.full((len(elems), len(model.moves)), -1, np.int32)
    for i, g in enumerate(elems):
        for j, h in enumerate(model.neighbors(g)):
            nbr[i, j] = index.get(h, -1)
    return elems, dist, nbr


# -- distortion inside balls ----------------------------------------------------------

def _shell_scan_impl(nbr, dist, n, ell_max):
    N = nbr.shape[0]
    deg = nbr.shape[1]
    stamp_a = np.zeros(N, np.int64)
    stamp_b = np.zeros(N, np.int64)
    da = np.zeros(N, np.int64)
    db = np.zeros(N, np.int64)
    qa = np.empty(N, np.int64)
    qb = np.empty(N, np.int64)
    best = np.zeros(ell_max + 1, np.int64)
    wa = np.full(ell_max + 1, -1, np.int64)
    wb = np.full(ell_max + 1, -1, np.int64)
    for a in range(N):
        if dist[a] > n or dist[a] <= n - ell_max:
            continue
        s = a + 1
        # word-metric neighbourhood of radius ell_max
        stamp_a[a] = s
        da[a] = 0
        qa[0] = a
        head = 0
        tail = 1
        targets = 0
        while head < tail:
            u = qa[head]
            head += 1
            if da[u] >= ell_max:
                continue
            for k in range(deg):
                v = nbr[u, k]
                if v < 0 or stamp_a[v] == s:
                    continue
                stamp_a[v] = s
                da[v] = da[u] + 1
                qa[tail] = v
                tail += 1
                if dist[v] <= n:
                    targets += 1
        # path metric of the ball until every target is reached
        stamp_b[a] = s
        db[a] = 0
        qb[0] = a
        head = 0
        tail = 1
        while head < tail and targets > 0:
            u = qb[head]
            head += 1
            for k in range(deg):
                v = nbr[u, k]
                if v < 0 or dist[v] > n or stamp_b[v] == s:
                    continue
                stamp_b[v] = s
                db[v] = db[u] + 1
                qb[tail] = v
                tail += 1
                if stamp_a[v] == s:
                    targets -= 1
                    j = da[v]
                    if db[v] > best[j] or (db[v] == best[j] and wa[j] == a and v < wb[j]):
                        best[j] = db[v]
                        wa[j] = a
                        wb[j] = v
    return best, wa, wb


if nb is not None:
    _shell_scan_numba = nb.njit(cache=True)(_shell_scan_impl)


def _bfs_layers(nbr: np.ndarray, src: int, allowed: np.ndarray | None, depth: int | None,
                stop: np.ndarray | None = None) -> np.ndarray:
    """Distances from ``src``; ``-1`` where unreached."""
    out = np.full(nbr.shape[0], -1, np.int64)
    out[src] = 0
    frontier = np.array([src], np.int64)
    d = 0
    remaining = None if stop is None else int(np.count_nonzero(stop))
    while len(frontier) and (depth is None or d < depth):
        if remaining is not None and remaining <= 0:
            break
        cand = nbr[frontier].ravel()
        cand = cand[cand >= 0]
        if allowed is not None:
            cand = cand[allowed[cand]]
        cand = np.unique(cand)
        cand = cand[out[cand] < 0]
        d += 1
        out[cand] = d
        if remaining is not None:
            remaining -= int(np.count_nonzero(stop[cand]))
        frontier = cand
    return out


def _shell_scan_numpy(nbr, dist, n, ell_max):
    best = np.zeros(ell_max + 1, np.int64)
    wa = np.full(ell_max + 1, -1, np.int64)
    wb = np.full(ell_max + 1, -1, np.int64)
    inball = dist <= n
    anchors = np.nonzero(inball & (dist > n - ell_max))[0]
    for a in anchors:
        word = _bfs_layers(nbr, a, None, ell_max)
        tmask = (word > 0) & inball
        if not tmask.any():
            continue
        intr = _bfs_layers(nbr, a, inball, None, stop=tmask)
        t = np.nonzero(tmask)[0]
        for j in range(1, ell_max + 1):
            sel = t[word[t] == j]
            if len(sel) == 0:
                continue
            vals = intr[sel]
            m = vals.max()
            v = sel[vals == m].min()
            if m > best[j]:
                best[j], wa[j], wb[j] = m, a, v
    return best, wa, wb


def shell_distortion(nbr: np.ndarray, dist: np.ndarray, n: int, ell_max: int,
                     backend_name: str | None = None):
    """Largest path-metric distance in ``B_n`` per exact word distance ``j <= ell_max``.

    Only anchors with ``|g| > n - ell_max`` are scanned: when
    ``|g| + |h| + d(g,h) <= 2n`` every geodesic from ``g`` to ``h`` stays in the
    ball, so other pairs contribute exactly their word distance.  The table must
    contain ``B_{n + ell_max}``.  Returns ``(best, witness_a, witness_b)``
    indexed by ``j``; witnesses are the smallest index pair attaining the maximum.
    """
    if ell_max < 1:
        return np.zeros(ell_max + 1, np.int64), np.full(ell_max + 1, -1), np.full(ell_max + 1, -1)
    if dist.max() < n + ell_max:
        raise ValueError("ball table must reach radius n + ell_max")
    nbr = np.ascontiguousarray(nbr, np.int64)
    dist = np.ascontiguousarray(dist, np.int64)
    if _pick(backend_name) == "numba":
        return _shell_scan_numba(nbr, dist, n, ell_max)
    return _shell_scan_numpy(nbr, dist, n, ell_max)


def masked_bfs(nbr: np.ndarray, allowed: np.ndarray, src: int) -> np.ndarray:
    """Distances from ``src`` inside the vertex set ``allowed``."""
    return _bfs_layers(nbr, src, allowed, None)
