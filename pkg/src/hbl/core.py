"""Finitely generated group models, Cayley-graph BFS and ball snapshots.

Every model exposes a finite symmetric generating set whose first entry is the
identity.  Words are tuples of generator indices; ``evaluate_word`` multiplies
them left to right starting from the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Hashable, Iterator, Mapping

from . import budget as _budget
from .errors import BudgetExceeded, InvalidElement, SnapshotError

Element = Hashable
Word = tuple  # tuple of generator indices


class GroupModel:
    """Base class for a group together with a generating set ``generators``.

    Subclasses set ``group_id``, ``generators`` (identity first) and ``names``
    (one token per generator), and implement ``mul``, ``inv``, ``is_element``,
    ``encode`` and ``decode``.  ``norm`` returns a closed-form word norm when
    the model has one and ``None`` otherwise.
    """

    group_id: str = "abstract"
    generators: tuple = ()
    names: tuple[str, ...] = ()

    def _finish_init(self) -> None:
        e = self.identity()
        gens = list(self.generators)
        if not gens or gens[0] != e:
            raise ValueError("generating set must start with the identity")
        if len(set(gens)) != len(gens):
            raise ValueError("generating set has duplicates")
        index = {s: i for i, s in enumerate(gens)}
        try:
            self.inverse_index = tuple(index[self.inv(s)] for s in gens)
        except KeyError:
            raise ValueError("generating set is not closed under inverse") from None
        self.moves = tuple(gens[1:])
        self._name_index = {n: i for i, n in enumerate(self.names)}

    # -- required interface -------------------------------------------------
    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inv(self, g: Element) -> Element:
        raise NotImplementedError

    def is_element(self, g: Any) -> bool:
        raise NotImplementedError

    def encode(self, g: Element) -> str:
        raise NotImplementedError

    def decode(self, text: str) -> Element:
        raise NotImplementedError

    # -- optional -----------------------------------------------------------
    def norm(self, g: Element) -> int | None:
        return None

    def neighbors(self, g: Element) -> list:
        """Right neighbours ``g*s`` for the non-identity generators."""
        mul = self.mul
        return [mul(g, s) for s in self.moves]

    def sort_key(self, g: Element):
        return g

    def validate(self, g: Any) -> Element:
        if not self.is_element(g):
            raise InvalidElement(f"{g!r} is not an element of {self.group_id}")
        return g

    def parse_word(self, text: str) -> Word:
        """Parse a word from generator names (single-char names may be run together)."""
        text = text.strip()
        if not text:
            return ()
        tokens = text.split() if " " in text else list(text)
        try:
            return tuple(self._name_index[t] for t in tokens)
        except KeyError as exc:
            raise ValueError(f"unknown generator name {exc.args[0]!r}") from None

    def format_word(self, w: Word) -> str:
        sep = "" if all(len(n) == 1 for n in self.names) else " "
        return sep.join(self.names[i] for i in w)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.group_id}>"


# -- functional API ----------------------------------------------------------

def mul(model: GroupModel, g: Element, h: Element) -> Element:
    return model.mul(model.validate(g), model.validate(h))


def inv(model: GroupModel, g: Element) -> Element:
    return model.inv(model.validate(g))


def evaluate_word(model: GroupModel, w: Word) -> Element:
    g = model.identity()
    gens = model.generators
    for i in w:
        if not 0 <= i < len(gens):
            raise ValueError(f"generator index {i} out of range")
        g = model.mul(g, gens[i])
    return g


def word_path(model: GroupModel, w: Word, start: Element | None = None) -> list:
    """All prefix products ``start*w[:k]`` for k = 0..len(w)."""
    g = model.identity() if start is None else start
    out = [g]
    gens = model.generators
    for i in w:
        g = model.mul(g, gens[i])
        out.append(g)
    return out


def distance(model: GroupModel, g: Element, h: Element, **bfs_kw) -> int:
    """Word distance ``|g^-1 h|``: closed form when available, BFS otherwise."""
    x = model.mul(model.inv(g), h)
    n = model.norm(x)
    return bfs_norm(model, x, **bfs_kw) if n is None else n


def norm(model: GroupModel, g: Element, **bfs_kw) -> int:
    n = model.norm(g)
    return bfs_norm(model, g, **bfs_kw) if n is None else n


# -- balls -------------------------------------------------------------------

@dataclass(frozen=True)
class BallSnapshot:
    """Exact ball ``B_r(center)`` with the BFS distance of every element."""

    group_id: str
    center: Element
    radius: int
    distances: Mapping = field(repr=False)
    generators: tuple = field(default=(), repr=False)

    @property
    def element_count(self) -> int:
        return len(self.distances)

    def __contains__(self, g) -> bool:
        return g in self.distances

    def __len__(self) -> int:
        return len(self.distances)

    def __iter__(self) -> Iterator:
        return iter(self.distances)

    def distance(self, g) -> int:
        return self.distances[g]

    def sphere(self, r: int) -> list:
        return [g for g, d in self.distances.items() if d == r]

    def sphere_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for d in self.distances.values():
            sizes[d] += 1
        return sizes

    def restrict(self, radius: int) -> "BallSnapshot":
        if radius > self.radius:
            raise ValueError("cannot restrict to a larger radius")
        table = {g: d for g, d in self.distances.items() if d <= radius}
        return BallSnapshot(self.group_id, self.center, radius, table, self.generators)


def bfs_ball(model: GroupModel, center: Element, radius: int,
             budget_mb: float | None = None) -> BallSnapshot:
    """Exact ball of the given radius around ``center`` by layered BFS."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    model.validate(center)
    limit = _budget.max_elements(budget_mb)
    dist = {center: 0}
    frontier = [center]
    sizes = [1]
    neighbors = model.neighbors
    for r in range(1, radius + 1):
        _budget.check_growth(len(dist), sizes, limit)
        nxt = []
        for g in frontier:
            for h in neighbors(g):
                if h not in dist:
                    dist[h] = r
                    nxt.append(h)
        frontier = nxt
        sizes.append(len(nxt))
        if not nxt:
            break
    return BallSnapshot(model.group_id, center, radius, dist, model.generators)


def bfs_norm(model: GroupModel, g: Element, max_radius: int | None = None,
             budget_mb: float | None = None) -> int:
    """Exact word norm by meet-in-the-middle BFS from ``e`` and from ``g``."""
    model.validate(g)
    e = model.identity()
    if g == e:
        return 0
    limit = _budget.max_elements(budget_mb)
    sides = [({e: 0}, [e], [1]), ({g: 0}, [g], [1])]
    depth = [0, 0]
    neighbors = model.neighbors
    while True:
        i = 0 if len(sides[0][1]) <= len(sides[1][1]) else 1
        dist, frontier, sizes = sides[i]
        other = sides[1 - i][0]
        if not frontier:
            raise InvalidElement(f"{g!r} is not reachable from the identity")
        if max_radius is not None and depth[0] + depth[1] >= max_radius:
            raise BudgetExceeded(f"norm exceeds max_radius={max_radius}")
        _budget.check_growth(len(sides[0][0]) + len(sides[1][0]), sizes, limit)
        r = depth[i] + 1
        nxt = []
        best = None
        for x in frontier:
            for y in neighbors(x):
                if y not in dist:
                    dist[y] = r
                    nxt.append(y)
                    d = other.get(y)
                    if d is not None and (best is None or d < best):
                        best = d
        if best is not None:
            return r + best
        sides[i] = (dist, nxt, sizes + [len(nxt)])
        depth[i] = r


def geodesic_words(model: GroupModel, g: Element, max_count: int | None = None,
                   budget_mb: float | None = None) -> list[Word]:
    """Geodesic words for ``g`` in lexicographic order of generator index.

    Uses the BFS distance labels of ``B_{|g|}(e)``: a backward walk from ``g``
    through strictly decreasing labels marks the geodesic interval, then a
    forward walk over that interval emits words.
    """
    n = bfs_norm(model, g, budget_mb=budget_mb)
    ball = bfs_ball(model, model.identity(), n, budget_mb=budget_mb)
    lab = ball.distances
    gens = model.generators
    inv_idx = model.inverse_index
    interval = {g}
    layer = [g]
    for d in range(n, 0, -1):
        prev = []
        for x in layer:
            for i in range(1, len(gens)):
                y = model.mul(x, gens[inv_idx[i]])
                if lab.get(y) == d - 1 and y not in interval:
                    interval.add(y)
                    prev.append(y)
        layer = prev

    out: list[Word] = []
    stack: list[tuple[Element, Word]] = [(model.identity(), ())]
    while stack:
        x, w = stack.pop()
        if len(w) == n:
            out.append(w)
            if max_count is not None and len(out) >= max_count:
                break
            continue
        step = []
        for i in range(1, len(gens)):
            y = model.mul(x, gens[i])
            if y in interval and lab.get(y) == len(w) + 1:
                step.append((y, w + (i,)))
        stack.extend(reversed(step))
    return out


def is_geodesic_word(model: GroupModel, w: Word) -> bool:
    """True when ``|evaluate_word(w)| == len(w)`` (then every prefix is geodesic)."""
    return norm(model, evaluate_word(model, w)) == len(w)


# -- snapshot persistence ----------------------------------------------------

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_HEADER = re.compile(
    r"^HBL1;group=(?P<group>[^;]+);gens=(?P<gens>.*);center=(?P<center>.*);"
    r"radius=(?P<radius>\d+);count=(?P<count>\d+)$"
)


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def _header(model: GroupModel, snap: BallSnapshot) -> str:
    gens = "|".join(model.encode(s) for s in model.generators)
    return (f"HBL1;group={snap.group_id};gens={gens};center={model.encode(snap.center)};"
            f"radius={snap.radius};count={snap.element_count}")


def save_snapshot(snap: BallSnapshot, path: str | Path, model: GroupModel | None = None) -> None:
    """Write ``snap`` in the line-based HBL1 format.

    The checksum covers every byte before the ``END`` line (header included).
    """
    if model is None:
        model = model_from_id(snap.group_id)
    if model.group_id != snap.group_id:
        raise SnapshotError("model does not match snapshot group")
    lines = [_header(model, snap)]
    items = sorted(snap.distances.items(), key=lambda kv: (kv[1], model.sort_key(kv[0])))
    lines.extend(f"{model.encode(g)};{d}" for g, d in items)
    body = "".join(line + "\n" for line in lines)
    digest = fnv1a_64(body.encode("utf-8"))
    Path(path).write_text(body + f"END;{digest:016x}\n", encoding="utf-8")


def load_snapshot(path: str | Path, model: GroupModel | None = None) -> BallSnapshot:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise SnapshotError(f"not UTF-8: {exc}") from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2:
        raise SnapshotError("truncated snapshot")
    m = _HEADER.match(lines[0])
    if not m:
        raise SnapshotError("malformed header")
    group = m["group"]
    if model is None:
        model = model_from_id(group)
    elif model.group_id != group:
        raise SnapshotError(f"snapshot is for {group}, not {model.group_id}")
    gens = "|".join(model.encode(s) for s in model.generators)
    if m["gens"] != gens:
        raise SnapshotError("generating set differs from the model's")
    count = int(m["count"])
    tail = lines[-1]
    if not tail.startswith("END;") or len(lines) != count + 2:
        raise SnapshotError("truncated snapshot")
    body = "".join(line + "\n" for line in lines[:-1])
    try:
        expected = int(tail[4:], 16)
    except ValueError:
        raise SnapshotError("malformed checksum line") from None
    if fnv1a_64(body.encode("utf-8")) != expected:
        raise SnapshotError("checksum mismatch")
    radius = int(m["radius"])
    try:
        center = model.validate(model.decode(m["center"]))
        table = {}
        for line in lines[1:-1]:
            enc, d = line.rsplit(";", 1)
            g = model.validate(model.decode(enc))
            table[g] = int(d)
    except (ValueError, InvalidElement) as exc:
        raise SnapshotError(f"malformed element line: {exc}") from None
    if any(d < 0 or d > radius for d in table.values()) or table.get(center) != 0:
        raise SnapshotError("distance table inconsistent with header")
    return BallSnapshot(group, center, radius, table, model.generators)


# -- Z^d ---------------------------------------------------------------------

class ZdModel(GroupModel):
    """Free abelian group Z^d with the standard l1 generators."""

    def __init__(self, d: int = 2):
        if d < 1:
            raise ValueError("dimension must be positive")
        self.d = d
        self.group_id = f"zd({d})"
        zero = (0,) * d
        gens = [zero]
        names = ["e"]
        for sign in (1, -1):
            for i in range(d):
                v = [0] * d
                v[i] = sign
                gens.append(tuple(v))
                names.append(f"{'+' if sign > 0 else '-'}{i + 1}")
        if d == 2:
            # east, north, west, south
            gens = [zero, (1, 0), (0, 1), (-1, 0), (0, -1)]
            names = ["e", "R", "U", "L", "D"]
        self.generators = tuple(gens)
        self.names = tuple(names)
        self._finish_init()

    def identity(self):
        return (0,) * self.d

    def mul(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def inv(self, g):
        return tuple(-x for x in g)

    def is_element(self, g) -> bool:
        return (isinstance(g, tuple) and len(g) == self.d
                and all(isinstance(x, int) and not isinstance(x, bool) for x in g))

    def encode(self, g) -> str:
        return ",".join(str(x) for x in g)

    def decode(self, text: str):
        return tuple(int(x) for x in text.split(","))

    def norm(self, g) -> int:
        return sum(abs(x) for x in g)


def model_from_id(group_id: str) -> GroupModel:
    """Rebuild a model from its ``group_id`` string."""
    m = re.fullmatch(r"heisenberg\((\d+)\)", group_id)
    if m:
        from .heisenberg import HeisenbergModel
        return HeisenbergModel(int(m[1]))
    if group_id == "lamplighter":
        from .lamplighter import LamplighterModel
        return LamplighterModel()
    m = re.fullmatch(r"zd\((\d+)\)", group_id)
    if m:
        return ZdModel(int(m[1]))
    m = re.fullmatch(r"wreath\(Z(\d+),Z(2?)(,lamp)?\)", group_id)
    if m:
        from .wreath import WreathModel
        return WreathModel(int(m[1]), 2 if m[2] else 1, "lamp" if m[3] else "switch")
    raise SnapshotError(f"unknown group id {group_id!r}")

