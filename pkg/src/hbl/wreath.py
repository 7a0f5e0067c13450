"""Wreath products Z_m wr Z and Z_m wr Z^2 with lamps on the vertices of K.

An element is ``(table, head)`` where ``table`` is a sorted tuple of
``(coord, value)`` pairs with ``value`` in ``1..m-1``.  Coordinates are ints for
``K = Z`` and pairs for ``K = Z^2``.

Two generating sets are provided.  ``switch`` uses the unit moves of K and
the writes ``+1, -1`` at the head.  ``lamp`` (``K = Z`` only) uses ``t`` and
``delta*t`` and their inverses, which for ``m = 2`` is the lamplighter set
after moving each lamp half a step.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
import math

from .core import GroupModel
from .errors import BudgetExceeded
from . import budget as _budget

STYLES = ("switch", "lamp")


def _add(p, q):
    if isinstance(p, int):
        return p + q
    return (p[0] + q[0], p[1] + q[1])


def _neg(p):
    if isinstance(p, int):
        return -p
    return (-p[0], -p[1])


class WreathModel(GroupModel):
    """``Z_m wr K`` for ``K`` in ``{Z, Z^2}``."""

    def __init__(self, m: int = 2, kdim: int = 1, style: str = "switch"):
        if m < 2:
            raise ValueError("lamp group order must be at least 2")
        if kdim not in (1, 2):
            raise ValueError("K must be Z or Z^2")
        if style not in STYLES or (style == "lamp" and kdim != 1):
            raise ValueError(f"unsupported generating set {style!r}")
        self.m, self.kdim, self.style = m, kdim, style
        kname = "Z" if kdim == 1 else "Z2"
        self.group_id = f"wreath(Z{m},{kname}" + (",lamp)" if style == "lamp" else ")")
        zero = 0 if kdim == 1 else (0, 0)
        self._zero = zero
        e = ((), zero)
        units = [1, -1] if kdim == 1 else [(1, 0), (0, 1), (-1, 0), (0, -1)]
        vals = sorted({1, m - 1})
        gens = [e]
        names = ["e"]
        if style == "switch":
            for u, nm in zip(units, ("t", "T") if kdim == 1 else ("x", "y", "X", "Y")):
                gens.append(((), u))
                names.append(nm)
            for v in vals:
                gens.append((((zero, v),), zero))
                names.append("w" if v == 1 else "W")
        else:
            gens += [((), 1), ((), -1)]
            names += ["t", "T"]
            for v in vals:
                g = (((0, v),), 1)
                gens += [g, self.inv(g)]
                names += ["s", "S"] if v == 1 else ["r", "R"]
        self.generators = tuple(gens)
        self.names = tuple(names)
        self._finish_init()

    def identity(self):
        return ((), self._zero)

    def mul(self, g, h):
        x, k = g
        y, j = h
        if not y:
            return (x, _add(k, j))
        m = self.m
        table = dict(x)
        for pos, v in y:
            p = _add(pos, k)
            nv = (table.get(p, 0) + v) % m
            if nv:
                table[p] = nv
            else:
                table.pop(p, None)
        return (tuple(sorted(table.items())), _add(k, j))

    def inv(self, g):
        x, k = g
        nk = _neg(k)
        m = self.m
        return (tuple(sorted((_add(p, nk), (m - v) % m) for p, v in x)), nk)

    def is_element(self, g) -> bool:
        if not (isinstance(g, tuple) and len(g) == 2 and isinstance(g[0], tuple)):
            return False
        x, k = g

        def is_coord(p):
            if self.kdim == 1:
                return isinstance(p, int) and not isinstance(p, bool)
            return (isinstance(p, tuple) and len(p) == 2
                    and all(isinstance(c, int) and not isinstance(c, bool) for c in p))

        if not is_coord(k):
            return False
        for item in x:
            if not (isinstance(item, tuple) and len(item) == 2 and is_coord(item[0])):
                return False
            if not (isinstance(item[1], int) and 0 < item[1] < self.m):
                return False
        return all(p[0] < q[0] for p, q in zip(x, x[1:]))

    def _coord(self, p) -> str:
        return str(p) if self.kdim == 1 else f"({p[0]},{p[1]})"

    def _parse_coord(self, text: str):
        if self.kdim == 1:
            return int(text)
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError(f"bad coordinate {text!r}")
        x, y = text[1:-1].split(",")
        return (int(x), int(y))

    def encode(self, g) -> str:
        x, k = g
        table = ",".join(f"{self._coord(p)}:{v}" for p, v in x)
        return f"table={table};head={self._coord(k)}"

    def decode(self, text: str):
        try:
            tab, hd = text.split(";")
            if not tab.startswith("table=") or not hd.startswith("head="):
                raise ValueError
            body = tab[len("table="):]
            items = []
            if body:
                # split on commas that are outside parentheses
                depth, cur = 0, ""
                parts = []
                for ch in body:
                    if ch == "(":
                        depth += 1
                    elif ch == ")":
                        depth -= 1
                    if ch == "," and depth == 0:
                        parts.append(cur)
                        cur = ""
                    else:
                        cur += ch
                parts.append(cur)
                for part in parts:
                    p, v = part.rsplit(":", 1)
                    items.append((self._parse_coord(p), int(v)))
            return (tuple(sorted(items)), self._parse_coord(hd[len("head="):]))
        except ValueError:
            raise ValueError(f"bad wreath element {text!r}") from None

    def norm(self, g):
        if self.kdim != 1:
            return None
        x, h = g
        if self.style == "lamp":
            # vertex lamp p is the edge lamp p + 1/2 of the lamplighter picture;
            # writes are free, so the value only needs one crossing per lamp.
            if self.m != 2:
                return None
            lo = min([0, h] + [p for p, _ in x])
            hi = max([0, h] + [p + 1 for p, _ in x])
            return (hi - lo) + min(-lo + (hi - h), hi + (h - lo))
        m = self.m
        lo = min([0, h] + [p for p, _ in x])
        hi = max([0, h] + [p for p, _ in x])
        walk = (hi - lo) + min(-lo + (hi - h), hi + (h - lo))
        return walk + sum(min(v, m - v) for _, v in x)


def lamp_to_wreath(g: tuple) -> tuple:
    """Lamplighter ``(lamps, head)`` to ``Z_2 wr Z``: edge ``k + 1/2`` becomes vertex ``k``."""
    lamps, h = g
    return (tuple(((s - 1) // 2, 1) for s in lamps), h)


def wreath_to_lamp(g: tuple) -> tuple:
    x, h = g
    return (tuple(2 * p + 1 for p, _ in x), h)


@dataclass(frozen=True)
class SplitBallInstance:
    model: WreathModel
    N: int
    g: tuple
    g1: tuple
    g2: tuple
    norm: int
    trim: int

    @property
    def radius(self) -> int:
        return self.norm - self.trim


def _ball_member(model: WreathModel, center, radius: int):
    cinv = model.inv(center)
    if model.norm(center) is not None:
        return lambda x: model.norm(model.mul(cinv, x)) <= radius
    from .core import bfs_ball
    ball = bfs_ball(model, center, radius)
    return ball.distances.__contains__


def find_trim(model: WreathModel, N: int, t: int = 1, max_trim: int = 6) -> int:
    """Smallest trim for which the trimmed ball around ``g`` blocks the origin side.

    Blocking means no element whose head is farther than ``N - t`` from both
    lit sites, with both sites cleared, lies in the ball.  The check runs over
    all cleared configurations supported within distance ``N + 2`` of the origin.
    """
    g = _lit_pair(model, N)
    norm = _norm(model, g)
    k1, k2 = _sites(model, N)

    def dK(p, q):
        if model.kdim == 1:
            return abs(p - q)
        return abs(p[0] - q[0]) + abs(p[1] - q[1])

    span = N + 2
    if model.kdim == 1:
        coords = [p for p in range(-span, span + 1) if p not in (k1, k2)]
        heads = [p for p in range(-span, span + 1) if dK(p, k1) > N - t and dK(p, k2) > N - t]
    else:
        coords = [(a, b) for a in range(-2, 3) for b in range(-1, 2) if (a, b) not in (k1, k2)]
        heads = [(a, b) for a in range(-span, span + 1) for b in range(-span, span + 1)
                 if dK((a, b), k1) > N - t and dK((a, b), k2) > N - t and abs(a) + abs(b) <= span]
    if len(coords) > 16:
        coords = sorted(coords, key=lambda p: dK(p, model._zero))[:16]
    configs = [tuple(sorted((p, 1) for i, p in enumerate(coords) if mask >> i & 1))
               for mask in range(1 << len(coords))]
    best = math.inf
    ginv = model.inv(g)
    for x in configs:
        for h in heads:
            best = min(best, _norm(model, model.mul(ginv, (x, h))))
    for trim in range(0, max_trim + 1):
        if best > norm - trim:
            return trim
    raise BudgetExceeded(f"no trim up to {max_trim} blocks the origin side")


def _sites(model: WreathModel, N: int):
    return (N, -N) if model.kdim == 1 else ((N, 0), (-N, 0))


def _lit_pair(model: WreathModel, N: int) -> tuple:
    k1, k2 = _sites(model, N)
    return (tuple(sorted(((k1, 1), (k2, 1)))), model._zero)


def _norm(model: WreathModel, g) -> int:
    from .core import norm
    return norm(model, g)


def construct_theorem1_instance(model: WreathModel, N: int, trim: int | None = None) -> SplitBallInstance:
    """Lamps ``1`` at ``+-N`` (along the first axis), head at the origin.

    ``g1`` and ``g2`` are the cleared configurations reached by erasing the two
    lamps in opposite orders and walking back toward the origin until the
    trimmed radius is used up; they sit just either side of the origin.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    g = _lit_pair(model, N)
    n = _norm(model, g)
    if trim is None:
        trim = find_trim(model, N)
    radius = n - trim
    ginv = model.inv(g)
    # erasing +N first leaves the head on the -N side and vice versa
    sides = []
    for sign in (-1, 1):
        for j in range(0, N + 1):
            hd = sign * j if model.kdim == 1 else (sign * j, 0)
            cand = ((), hd)
            if _norm(model, model.mul(ginv, cand)) <= radius:
                sides.append(cand)
                break
        else:
            raise BudgetExceeded("no cleared element fits in the trimmed ball")
    return SplitBallInstance(model, N, g, sides[0], sides[1], n, trim)


def intrinsic_distance_in_ball(model: WreathModel, center, radius: int, x, y,
                               budget_mb: float | None = None) -> int | float:
    """Shortest path from ``x`` to ``y`` inside ``B_radius(center)``.

    Membership is decided by the closed-form norm when the model has one.
    """
    inside = _ball_member(model, center, radius)
    if not (inside(x) and inside(y)):
        raise ValueError("endpoints must lie in the ball")
    if x == y:
        return 0
    limit = _budget.max_elements(budget_mb)
    dist = {x: 0}
    queue = deque([x])
    neighbors = model.neighbors
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in neighbors(u):
            if v in dist or not inside(v):
                continue
            if v == y:
                return du
            dist[v] = du
            queue.append(v)
        if len(dist) > limit:
            raise BudgetExceeded("intrinsic search exceeds budget", estimated=len(dist))
    return math.inf
