"""Discrete Heisenberg groups H_{2n+1} in doubled-height coordinates.

Elements are flat integer tuples ``(a_1..a_n, b_1..b_n, c)`` with product
``(a,b,c)(a',b',c') = (a+a', b+b', c+c' + a.b' - a'.b)``; genuine group elements
satisfy ``c = a.b (mod 2)``.  The product is defined on all of Z^{2n+1}, and the
H_3 norm functions accept parity-violating triples, for which they return the
value of the optimisation problem rather than a word norm.

For H_3 the generating set is ``e, R=(1,0,0), U=(0,1,0), L=(-1,0,0), D=(0,-1,0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import GroupModel, Word
from .errors import InvalidElement

R, U, L, D = 1, 2, 3, 4
STEP = {R: (1, 0), U: (0, 1), L: (-1, 0), D: (0, -1)}
LETTER = {v: k for k, v in STEP.items()}


class HeisenbergModel(GroupModel):
    """H_{2n+1} with generators ``e, +a_i, +b_i, -a_i, -b_i``."""

    def __init__(self, n: int = 1):
        if n < 1:
            raise ValueError("rank must be at least 1")
        self.n = n
        self.group_id = f"heisenberg({n})"
        dim = 2 * n + 1
        gens = [(0,) * dim]
        for sign in (1, -1):
            for i in range(2 * n):
                v = [0] * dim
                v[i] = sign
                gens.append(tuple(v))
        if n == 1:
            self.names = ("e", "R", "U", "L", "D")
        else:
            names = ["e"] + [f"a{i + 1}" for i in range(n)] + [f"b{i + 1}" for i in range(n)]
            names += [f"A{i + 1}" for i in range(n)] + [f"B{i + 1}" for i in range(n)]
            self.names = tuple(names)
        self.generators = tuple(gens)
        self._finish_init()

    def identity(self):
        return (0,) * (2 * self.n + 1)

    def mul(self, g, h):
        n = self.n
        if n == 1:
            a, b, c = g
            x, y, z = h
            return (a + x, b + y, c + z + a * y - x * b)
        cross = sum(g[i] * h[n + i] - h[i] * g[n + i] for i in range(n))
        head = tuple(p + q for p, q in zip(g[:-1], h[:-1]))
        return head + (g[-1] + h[-1] + cross,)

    def inv(self, g):
        return tuple(-x for x in g)

    def neighbors(self, g):
        if self.n != 1:
            return super().neighbors(g)
        a, b, c = g
        return [(a + 1, b, c - b), (a, b + 1, c + a), (a - 1, b, c + b), (a, b - 1, c - a)]

    def is_element(self, g) -> bool:
        n = self.n
        if not (isinstance(g, tuple) and len(g) == 2 * n + 1):
            return False
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in g):
            return False
        dot = sum(g[i] * g[n + i] for i in range(n))
        return (g[-1] - dot) % 2 == 0

    def encode(self, g) -> str:
        n = self.n
        a = ",".join(str(x) for x in g[:n])
        b = ",".join(str(x) for x in g[n:2 * n])
        return f"{a};{b};{g[-1]}"

    def decode(self, text: str):
        parts = text.split(";")
        if len(parts) != 3:
            raise ValueError(f"bad Heisenberg tuple {text!r}")
        a = [int(x) for x in parts[0].split(",")]
        b = [int(x) for x in parts[1].split(",")]
        if len(a) != self.n or len(b) != self.n:
            raise ValueError(f"bad Heisenberg tuple {text!r}")
        return tuple(a + b + [int(parts[2])])

    def norm(self, g):
        if self.n != 1:
            return None
        return h3_norm(g)[0]


H3 = HeisenbergModel(1)


def is_h3_element(g) -> bool:
    return H3.is_element(g)


def projection_flip(g: tuple) -> tuple:
    """``(a,b,c) -> (-a,-b,c)`` in any rank."""
    return tuple(-x for x in g[:-1]) + (g[-1],)


def natural_projection(g: tuple) -> tuple:
    """Drop the height coordinate."""
    return tuple(g[:-1])


# -- the H_3 norm ----------------------------------------------------------------

@dataclass(frozen=True)
class NormWitness:
    """Optimal side lengths for ``(|a|, |b|, |c|)``.

    ``A >= |a|``, ``B >= |b|`` and ``2AB - |a||b| >= |c|``; ``excess = B - |b|``.
    """

    A: int
    B: int
    regime: str
    excess: int
    norm: int


def _split(s: int, a: int, b: int) -> tuple[int, int]:
    """Side lengths with ``A + B = s`` reached by the incremental process.

    The process grows the shorter side first and breaks ties towards ``A``, so
    the pair is the most balanced one allowed by ``A >= a``, ``B >= b``.
    """
    if 2 * a >= s:
        return a, s - a
    if 2 * b >= s:
        return s - b, b
    return (s + 1) // 2, s // 2


def _best_area(s: int, a: int, b: int) -> int:
    A, B = _split(s, a, b)
    return 2 * A * B


def _min_balanced_sum(target: int) -> int:
    """Smallest ``s`` with ``2*floor(s^2/4) >= target``."""
    if target <= 0:
        return 0
    k = -(-target // 2)
    s = math.isqrt(4 * k)
    while (s * s) // 4 < k:
        s += 1
    while s > 0 and ((s - 1) * (s - 1)) // 4 >= k:
        s -= 1
    return s


def regime_of(a: int, b: int, c: int) -> str:
    a, b, c = abs(a), abs(b), abs(c)
    if a < b:
        a, b = b, a
    if c <= a * b:
        return "first"
    if c <= 2 * a * a - a * b:
        return "second"
    return "third"


def _min_sum(a: int, b: int, c: int) -> int:
    """Minimal ``A + B`` for non-negative inputs."""
    target = c + a * b
    lo = a + b
    if a + b + c < 100:
        s = lo
        while _best_area(s, a, b) < target:
            s += 1
        return s
    if 2 * a * b >= target:
        return lo
    candidates = [max(2 * a, 2 * b, _min_balanced_sum(target))]
    for pin, other in ((a, b), (b, a)):
        if pin > 0:
            s = pin + max(other, -(-target // (2 * pin)))
            if s <= 2 * pin:
                candidates.append(s)
    s = max(lo, min(candidates))
    # the best area is monotone in s, so a local scan certifies minimality
    while _best_area(s, a, b) < target:
        s += 1
    while s > lo and _best_area(s - 1, a, b) >= target:
        s -= 1
    return s


def h3_norm(g: Sequence[int]) -> tuple[int, NormWitness]:
    """Word norm of ``(a,b,c)`` for the standard generators, with an optimal witness."""
    a, b, c = (abs(int(x)) for x in g)
    s = _min_sum(a, b, c)
    A, B = _split(s, a, b)
    n = 2 * s - a - b
    return n, NormWitness(A, B, regime_of(a, b, c), B - b, n)


def optimization_process(g: Sequence[int]) -> NormWitness:
    """Run the step-by-step side-length growth literally (O(sqrt|c|) steps)."""
    a, b, c = (abs(int(x)) for x in g)
    A, B = a, b
    while 2 * A * B - a * b < c:
        if A <= B:
            A += 1
        else:
            B += 1
    n = 2 * (A + B) - a - b
    return NormWitness(A, B, regime_of(a, b, c), B - b, n)


def h3_norm_closed(g: Sequence[int]) -> int:
    """Three-case explicit formula, evaluated in exact integer arithmetic."""
    a, b, c = (abs(int(x)) for x in g)
    if a < b:
        a, b = b, a
    if c <= a * b:
        return a + b
    if c <= 2 * a * a - a * b:
        return 2 * (-(-(c - a * b) // (2 * a))) + a + b
    t = 2 * (c + a * b)
    n = math.isqrt(t - 1) + 1  # ceil(sqrt(t))
    return 2 * ((n + 1) // 2 + n // 2) - a - b


# -- symmetries ------------------------------------------------------------------

# signed permutations of the plane as (m11, m12, m21, m22)
_D4 = [
    (1, 0, 0, 1), (0, 1, 1, 0), (-1, 0, 0, 1), (1, 0, 0, -1),
    (0, -1, 1, 0), (0, 1, -1, 0), (-1, 0, 0, -1), (0, -1, -1, 0),
]


def _apply(m, x: int, y: int) -> tuple[int, int]:
    return m[0] * x + m[1] * y, m[2] * x + m[3] * y


def _det(m) -> int:
    return m[0] * m[3] - m[1] * m[2]


def _inverse(m):
    d = _det(m)
    return (m[3] * d, -m[1] * d, -m[2] * d, m[0] * d)


def plane_automorphism(m, g: tuple) -> tuple:
    """Automorphism induced by a signed permutation ``m`` of the plane."""
    x, y = _apply(m, g[0], g[1])
    return (x, y, _det(m) * g[2])


def map_word(m, w: Word) -> Word:
    return tuple(LETTER[_apply(m, *STEP[i])] for i in w)


def reverse_height(g: tuple) -> tuple:
    """``(a,b,c) -> (a,b,-c)``; realised on words by reversing them."""
    return (g[0], g[1], -g[2])


def normal_form(g: tuple):
    """Return ``(m, flipped, (p, q, r))`` with ``p >= q >= 0`` and ``r >= 0``.

    ``(p, q, -r if flipped else r)`` is the D4 image of ``g`` under ``m``.
    """
    a, b, c = g
    for m in _D4:
        p, q = _apply(m, a, b)
        if p >= q >= 0:
            r = _det(m) * c
            return m, r < 0, (p, q, abs(r))
    raise AssertionError("unreachable")


# -- canonical geodesics -----------------------------------------------------------

def _staircase(a: int, b: int, c: int) -> Word:
    """East/north word for ``a >= b >= 0``, ``0 <= c <= ab`` tracking the pseudogeodesic."""
    if a == 0 or b == 0:
        return (R,) * a + (U,) * b
    area = (a * b - c) // 2  # sum over columns of the north steps taken before them
    if area == 0:
        return (R,) * a + (U,) * b
    # profile: flat until x = d, then linear up to x = a
    width = math.sqrt(2 * a * area / b)
    d = a - width

    def integral(x: float) -> float:
        if x <= d:
            return 0.0
        return (x - d) ** 2 * b / (2 * a)

    cum = [0] + [round(integral(i)) for i in range(1, a)] + [area]
    heights = sorted(max(0, min(b, cum[i] - cum[i - 1])) for i in range(1, a + 1))
    drift = area - sum(heights)
    # clamping can only matter through float error; push the residue into the tail
    i = a - 1
    while drift and i >= 0:
        step = max(-heights[i], min(b - heights[i], drift))
        heights[i] += step
        drift -= step
        i -= 1
    heights.sort()
    word: list[int] = []
    prev = 0
    for h in heights:
        word.extend([U] * (h - prev))
        word.append(R)
        prev = h
    word.extend([U] * (b - prev))
    return tuple(word)


def _loop_word(a: int, b: int, c: int) -> Word:
    """Rectangle word with one bump for ``a >= b >= 0``, ``c > ab``."""
    _, wit = h3_norm((a, b, c))
    A, B = wit.A, wit.B
    j = (2 * A * B - a * b - c) // 2
    if j < A and B >= 1:
        body = (R,) * (A - j) + (U,) + (R,) * j + (U,) * (B - 1)
    else:
        body = (R,) * (A - 1) + (U,) * j + (R,) + (U,) * (B - j)
    return (D,) * (B - b) + body + (L,) * (A - a)


def canonical_geodesic(g: tuple) -> Word:
    """A geodesic word for ``g`` in H_3 following its pseudogeodesic.

    Raises :class:`InvalidElement` for triples outside H_3 (wrong parity).
    """
    if not is_h3_element(g):
        raise InvalidElement(f"{g!r} is not in H_3: height parity must match a*b")
    m, flipped, (p, q, r) = normal_form(g)
    w = _staircase(p, q, r) if r <= p * q else _loop_word(p, q, r)
    if flipped:
        w = w[::-1]
    return map_word(_inverse(m), w)


def pseudogeodesic(g: tuple) -> list[tuple[float, float]]:
    """Vertices of the real piecewise-linear curve the canonical geodesic follows."""
    m, flipped, (a, b, c) = normal_form(g)
    T = c + a * b
    if a == 0 and c == 0:
        pts = [(0.0, 0.0)]
    elif c <= a * b:
        if b == 0 or c == a * b:
            pts = [(0.0, 0.0), (float(a), 0.0), (float(a), float(b))]
        else:
            d = a - math.sqrt(a * (a - c / b))
            pts = [(0.0, 0.0), (d, 0.0), (float(a), (1 - d / a) * b), (float(a), float(b))]
    elif c <= 2 * a * a - a * b:
        B = T / (2 * a)
        pts = [(0.0, 0.0), (0.0, b - B), (float(a), b - B), (float(a), float(b))]
    else:
        A = B = math.sqrt(T / 2)
        pts = [(0.0, 0.0), (0.0, b - B), (A, b - B), (A, float(b)), (float(a), float(b))]
    if flipped:
        # reversing the word reverses the curve and translates it to start at 0
        pts = [(a - x, b - y) for x, y in reversed(pts)]
    mi = _inverse(m)
    return [(mi[0] * x + mi[1] * y, mi[2] * x + mi[3] * y) for x, y in pts]


def _linf_to_segment(p, s0, s1) -> float:
    """Chebyshev distance from point ``p`` to segment ``s0 s1``."""
    (px, py), (x0, y0), (x1, y1) = p, s0, s1
    dx, dy = x1 - x0, y1 - y0
    ts = {0.0, 1.0}
    for sx, sy in ((px - x0, py - y0),):
        for den, num in ((dx - dy, sx - sy), (dx + dy, sx + sy)):
            if den != 0:
                ts.add(num / den)
        if dx != 0:
            ts.add(sx / dx)
        if dy != 0:
            ts.add(sy / dy)
    best = math.inf
    for t in ts:
        if 0.0 <= t <= 1.0:
            qx, qy = x0 + t * dx, y0 + t * dy
            best = min(best, max(abs(px - qx), abs(py - qy)))
    return best


def chebyshev_gap(points, polyline) -> float:
    """Largest Chebyshev distance from a point in ``points`` to ``polyline``."""
    if len(polyline) == 1:
        px0, py0 = polyline[0]
        return max((max(abs(x - px0), abs(y - py0)) for x, y in points), default=0.0)
    segs = list(zip(polyline, polyline[1:]))
    return max((min(_linf_to_segment(p, s0, s1) for s0, s1 in segs) for p in points),
               default=0.0)


# -- planar words ------------------------------------------------------------------

def planar_path(w: Word) -> list[tuple[int, int]]:
    x = y = 0
    out = [(0, 0)]
    for i in w:
        dx, dy = STEP[i]
        x += dx
        y += dy
        out.append((x, y))
    return out


def double_area(w: Word) -> int:
    """Twice the signed area enclosed by the planar path closed with a chord to 0.

    The chord back to the origin contributes nothing to the shoelace sum, so the
    result is the height of ``evaluate_word(w)`` for every planar word.
    """
    pts = planar_path(w)
    return sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:]))


def eta(n: int, x: int, y: int) -> int:
    """Maximal height in the ``(x, y)`` column of ``B_n(e)``."""
    if abs(x) + abs(y) > n:
        raise ValueError(f"column ({x},{y}) is empty in the {n}-ball")
    par = (x * y) % 2
    lo, hi = 0, n * n + 1  # height par + 2k; k = lo is in the ball
    while h3_norm((x, y, par + 2 * hi))[0] <= n:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if h3_norm((x, y, par + 2 * mid))[0] <= n:
            lo = mid
        else:
            hi = mid
    return par + 2 * lo


def grazing_report(N: int) -> dict:
    """Norm of the central element ``(0,0,2N^2+1)`` and the largest radius that grazes.

    ``(0,0,2N^2+1)`` violates the height parity, so the values are those of
    the norm formula on Z^3; ``valid_center`` gives the same data for the
    nearest genuine element ``(0,0,2N^2+2)``.
    """
    out = {"N": N, "stated_radius": 4 * N + 2}
    for key, height in (("formal", 2 * N * N + 1), ("valid_center", 2 * N * N + 2)):
        norm = h3_norm((0, 0, height))[0]
        center = (0, 0, -height)
        rad = norm - 1
        grazes = any(h3_norm(H3.mul(H3.inv(center), s))[0] <= rad for s in H3.moves)
        out[key] = {"height": height, "norm": norm, "grazing_radius": rad,
                    "neighbor_inside": grazes, "in_group": is_h3_element(center)}
    return out
