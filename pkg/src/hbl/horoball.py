"""Horoballs seen through finite windows.

A :class:`WindowSet` records a status for every element of a finite window:
``IN``, ``OUT`` or ``UNDETERMINED``.  Limits of ball families are evaluated on
the window along a schedule; Busemann horoballs along eventually periodic rays
get ``OUT`` only from an explicit certificate.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .core import GroupModel, Word, bfs_ball, evaluate_word, norm as word_norm
from .errors import NonGeodesicError, UndeterminedStatus
from .heisenberg import H3, HeisenbergModel, h3_norm, map_word, _D4
from .lamplighter import LAMP, LamplighterModel, lamp_norm, mirror, MIRROR_LETTER, window_elements


class Status(str, enum.Enum):
    IN = "IN"
    OUT = "OUT"
    UNDETERMINED = "UNDETERMINED"


@dataclass(frozen=True)
class WindowSpec:
    """A finite list of elements, identity included."""

    group_id: str
    shape: str
    params: tuple
    elements: tuple

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("window elements must be distinct")

    def __contains__(self, g) -> bool:
        return g in self._index

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def _index(self) -> frozenset:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = frozenset(self.elements)
            object.__setattr__(self, "_idx", idx)
        return idx


def h3_box(ra: int, rb: int, rc: int) -> WindowSpec:
    """Group elements with ``|a| <= ra``, ``|b| <= rb``, ``|c| <= rc``."""
    elems = tuple((a, b, c) for a in range(-ra, ra + 1) for b in range(-rb, rb + 1)
                  for c in range(-rc, rc + 1) if (c - a * b) % 2 == 0)
    return WindowSpec(H3.group_id, "coord_box", (ra, rb, rc), elems)


def lamp_window(w: int) -> WindowSpec:
    return WindowSpec(LAMP.group_id, "coord_box", (w,), tuple(window_elements(w)))


def norm_ball_window(model: GroupModel, w: int) -> WindowSpec:
    ball = bfs_ball(model, model.identity(), w)
    elems = tuple(sorted(ball.distances, key=lambda g: (ball.distances[g], model.sort_key(g))))
    return WindowSpec(model.group_id, "norm_ball", (w,), elems)


@dataclass
class WindowSet:
    window: WindowSpec
    status: dict

    def __post_init__(self):
        missing = [g for g in self.window.elements if g not in self.status]
        if missing:
            raise ValueError(f"{len(missing)} window elements lack a status")

    def __getitem__(self, g) -> Status:
        return self.status[g]

    def members(self) -> list:
        return [g for g in self.window.elements if self.status[g] is Status.IN]

    def counts(self) -> dict:
        out = {s: 0 for s in Status}
        for g in self.window.elements:
            out[self.status[g]] += 1
        return out

    def same_as(self, other: "WindowSet") -> bool:
        return all(self.status[g] == other.status.get(g) for g in self.window.elements)

    def to_csv(self, path: str | Path, model: GroupModel) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["element", "status"])
            for g in self.window.elements:
                w.writerow([model.encode(g), self.status[g].value])


def from_predicate(window: WindowSpec, pred: Callable) -> WindowSet:
    return WindowSet(window, {g: Status.IN if pred(g) else Status.OUT for g in window.elements})


def indicator(window: WindowSpec, members: Iterable) -> WindowSet:
    ms = set(members)
    return from_predicate(window, ms.__contains__)


def predicted_P_h3(window: WindowSpec) -> WindowSet:
    """Everything except the non-negative part of the central axis."""
    return from_predicate(window, lambda g: not (g[0] == 0 and g[1] == 0 and g[2] >= 0))


def predicted_P_lamp(window: WindowSpec) -> WindowSet:
    return from_predicate(window, lambda g: g[1] < 0)


# -- ball families ---------------------------------------------------------------

def _distance_fn(model: GroupModel) -> Callable:
    """Exact distance, falling back to BFS; formal for H_3 triples of either parity."""
    if isinstance(model, HeisenbergModel) and model.n == 1:
        return lambda c, x: h3_norm(model.mul(model.inv(c), x))[0]

    def dist(c, x):
        return word_norm(model, model.mul(model.inv(c), x))
    return dist


def ball_family_set(model: GroupModel, center, radius: int, window: WindowSpec) -> WindowSet:
    dist = _distance_fn(model)
    return from_predicate(window, lambda g: dist(center, g) <= radius)


def h3_central_family(N: int, valid: bool = False) -> tuple[tuple, int]:
    """Centre ``(0, 0, -2N^2 - 1)`` with radius ``|(0,0,2N^2+1)| - 1``.

    The literal centre has the wrong height parity, so its distances are the
    formal values of the norm formula.  ``valid=True`` uses the genuine element
    ``(0, 0, -2N^2 - 2)`` and radius ``|(0,0,2N^2+2)| - 1`` instead.
    """
    h = 2 * N * N + (2 if valid else 1)
    return (0, 0, -h), h3_norm((0, 0, h))[0] - 1


def constant_family(model: GroupModel) -> Callable:
    return lambda N: (model.identity(), N)


@dataclass
class StabilizationReport:
    schedule: list
    changes: list  # schedule values at which the window restriction changed
    onset: int | None  # first N from which the restriction stays constant
    stable: bool  # constant over the final ceil(len/2) schedule points
    trivial: bool  # the limit fills the whole window or is empty there
    history: list = field(default_factory=list, repr=False)


def limit_window(model: GroupModel, family: Callable, window: WindowSpec,
                 schedule: Sequence[int]) -> tuple[WindowSet, StabilizationReport]:
    """Evaluate ``B_{r(N)}(c(N))`` on the window for every ``N`` in the schedule."""
    sched = list(schedule)
    if not sched or any(p >= q for p, q in zip(sched, sched[1:])):
        raise ValueError("schedule must be non-empty and increasing")
    sets = []
    for N in sched:
        center, radius = family(N)
        sets.append(ball_family_set(model, center, radius, window))
    changes = [sched[i] for i in range(1, len(sets)) if not sets[i].same_as(sets[i - 1])]
    onset = sched[0]
    for i in range(len(sets) - 1, 0, -1):
        if not sets[i].same_as(sets[i - 1]):
            onset = sched[i]
            break
    tail = math.ceil(len(sched) / 2)
    stable = all(s.same_as(sets[-1]) for s in sets[-tail:])
    c = sets[-1].counts()
    trivial = c[Status.IN] == 0 or c[Status.OUT] == 0
    return sets[-1], StabilizationReport(sched, changes, onset, stable, trivial, sets)


# -- Busemann horoballs --------------------------------------------------------------

@dataclass(frozen=True)
class Ray:
    """The infinite word ``prefix + tail + tail + ...`` read from the identity."""

    prefix: Word
    tail: Word

    def __post_init__(self):
        if not self.tail:
            raise ValueError("a ray needs a non-empty periodic tail")

    def letter(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.tail[(i - len(self.prefix)) % len(self.tail)]

    def word(self, n: int) -> Word:
        return tuple(self.letter(i) for i in range(n))


def ray_points(model: GroupModel, ray: Ray, n: int) -> list:
    g = model.identity()
    out = [g]
    for i in range(n):
        g = model.mul(g, model.generators[ray.letter(i)])
        out.append(g)
    return out


@dataclass(frozen=True)
class Certificate:
    """``d(g, p(t)) - t`` is constant for ``t >= start`` and equals ``deficit``."""

    start: int
    deficit: int
    kind: str


def _h3_axis_certificate(ray: Ray, g) -> Certificate | None:
    if ray.prefix or len(set(ray.tail)) != 1:
        return None
    letter = ray.tail[0]
    # rotate so the ray runs east; the automorphism preserves distances
    for m in _D4:
        if map_word(m, (letter,)) == (1,) and m[0] * m[3] - m[1] * m[2] == 1:
            break
    else:
        return None
    x, y = m[0] * g[0] + m[1] * g[1], m[2] * g[0] + m[3] * g[1]
    a, b, c = x, y, g[2]
    # For t >= start the triple (t-a, -b, tb-c) sits in the first or second
    # regime with long side t-a, and the second-regime excess
    # |tb-c| - (t-a)|b| is independent of t with size at most |c| + |ab|;
    # hence |.| = (t-a) + |b| + 2k with a fixed k in {0, 1}.
    start = 4 * (abs(a) + abs(b) + abs(c) + abs(a * b)) + 4

    def deficit(t):
        return h3_norm((t - a, -b, t * b - c))[0] - t

    d0 = deficit(start)
    if deficit(start + 1) != d0 or deficit(2 * start) != d0:
        raise AssertionError("axis deficit failed to settle")  # pragma: no cover
    return Certificate(start, d0, "h3-axis")


def _lamp_sweep_certificate(ray: Ray, g) -> Certificate | None:
    tail = set(ray.tail)
    if tail <= {3, 4}:
        flip = False
    elif tail <= {1, 2}:
        flip = True
    else:
        return None
    if flip:
        ray = Ray(tuple(MIRROR_LETTER[i] for i in ray.prefix), tuple(MIRROR_LETTER[i] for i in ray.tail))
        g = mirror(g)
    k = len(ray.prefix)
    pk = evaluate_word(LAMP, ray.prefix)
    lamps = list(g[0]) + list(pk[0])
    low = min([g[1], pk[1]] + [(s - 1) // 2 for s in lamps])
    # once the head is two steps left of everything, the distance is
    # 2*max(reach) - head - head(g) and the deficit freezes
    start = k + max(0, pk[1] - low + 2)
    pts = ray_points(LAMP, ray, start + len(ray.tail) + 1)

    def deficit(t):
        return lamp_norm(LAMP.mul(LAMP.inv(g), pts[t])) - t

    d0 = deficit(start)
    if any(deficit(t) != d0 for t in range(start, len(pts))):
        raise AssertionError("sweep deficit failed to settle")  # pragma: no cover
    return Certificate(start, d0, "lamp-sweep")


def busemann_certificate(model: GroupModel, ray: Ray, g) -> Certificate | None:
    if isinstance(model, HeisenbergModel) and model.n == 1:
        return _h3_axis_certificate(ray, g)
    if isinstance(model, LamplighterModel):
        return _lamp_sweep_certificate(ray, g)
    return None


def busemann_window(model: GroupModel, ray: Ray, window: WindowSpec, n_max: int) -> WindowSet:
    """Tri-state prefix of the Busemann horoball ``union_n B_n(p(n))``.

    ``IN`` needs a witness ``n <= n_max``; ``OUT`` needs a certificate that the
    deficit ``d(g, p(n)) - n`` settles at a positive value.
    """
    pts = ray_points(model, ray, n_max)
    for t, p in enumerate(pts):
        if word_norm(model, p) != t:
            raise NonGeodesicError(f"ray is not geodesic at step {t}")
    dist = _distance_fn(model)
    status = {}
    for g in window.elements:
        if any(dist(g, pts[t]) <= t for t in range(n_max + 1)):
            status[g] = Status.IN
            continue
        cert = busemann_certificate(model, ray, g)
        status[g] = Status.OUT if cert is not None and cert.deficit > 0 else Status.UNDETERMINED
    return WindowSet(window, status)


# -- operations on window sets ---------------------------------------------------------

def grazes(P: WindowSet, g, model: GroupModel) -> bool:
    """``g`` is outside ``P`` and one of its neighbours is inside."""
    pts = [g] + model.neighbors(g)
    for h in pts:
        if h not in P.window:
            raise ValueError(f"{h!r} lies outside the window")
        if P.status[h] is Status.UNDETERMINED:
            raise UndeterminedStatus(f"status of {h!r} is undetermined")
    return P.status[g] is Status.OUT and any(P.status[h] is Status.IN for h in pts[1:])


def translate(P: WindowSet, g, model: GroupModel) -> WindowSet:
    """``h -> P(g h)`` on the same window; unknown where ``g h`` leaves it."""
    out = {}
    for h in P.window.elements:
        gh = model.mul(g, h)
        out[h] = P.status[gh] if gh in P.window else Status.UNDETERMINED
    return WindowSet(P.window, out)


def max_ca_step(x: WindowSet, model: GroupModel) -> WindowSet:
    """One step of ``f(x)_g = max_s x_{gs}`` on the elements whose S-neighbourhood is visible."""
    keep = []
    out = {}
    for g in x.window.elements:
        nbrs = [g] + model.neighbors(g)
        if not all(h in x.window for h in nbrs):
            continue
        vals = [x.status[h] for h in nbrs]
        if Status.UNDETERMINED in vals:
            raise UndeterminedStatus("max automaton needs determined statuses")
        keep.append(g)
        out[g] = Status.IN if Status.IN in vals else Status.OUT
    spec = WindowSpec(x.window.group_id, "shrunk", x.window.params, tuple(keep))
    return WindowSet(spec, out)


def restrict(P: WindowSet, window: WindowSpec) -> WindowSet:
    return WindowSet(window, {g: P.status[g] for g in window.elements})


def flip_invariant(P: WindowSet) -> bool:
    """Invariance under ``(a, b, c) -> (-a, -b, c)`` where both points are visible."""
    for g in P.window.elements:
        h = (-g[0], -g[1], g[2])
        if h in P.window and P.status[h] != P.status[g]:
            return False
    return True


def h3_columns(P: WindowSet) -> dict:
    """Per-column ``(x, y) -> (zmin, zmax)`` of the ``IN`` heights."""
    cols: dict = {}
    for g in P.members():
        key = (g[0], g[1])
        lo, hi = cols.get(key, (g[2], g[2]))
        cols[key] = (min(lo, g[2]), max(hi, g[2]))
    return dict(sorted(cols.items()))
