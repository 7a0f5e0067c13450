"""The lamplighter group Z_2 wr Z with generators ``e, a, b, a^-1, b^-1``.

Lamps sit on the half-integers; lamp ``k + 1/2`` is stored as the odd integer
``2k + 1``.  An element is ``(lamps, head)`` with ``lamps`` a sorted tuple.
``a`` moves the head one step right; ``b`` flips the lamp just right of the
head and then moves right.
"""

from __future__ import annotations

from .core import GroupModel, Word

A_POS, B_POS, A_NEG, B_NEG = 1, 2, 3, 4

_ALIASES = {
    "a": A_POS, "b": B_POS, "A": A_NEG, "B": B_NEG,
    "a^-1": A_NEG, "b^-1": B_NEG, "a⁻¹": A_NEG, "b⁻¹": B_NEG,
}


def _xor(x: tuple, y) -> tuple:
    return tuple(sorted(set(x).symmetric_difference(y)))


def lamp_mul(g: tuple, h: tuple) -> tuple:
    """``(x, m)(y, n) = (x + shift_m(y), m + n)``."""
    x, m = g
    y, n = h
    return (_xor(x, (s + 2 * m for s in y)), m + n)


def lamp_inv(g: tuple) -> tuple:
    x, m = g
    return (tuple(s - 2 * m for s in x), -m)


def head(g: tuple) -> int:
    return g[1]


def lamp_norm(g: tuple) -> int:
    """Exact word norm: the shortest walk from 0 to the head crossing every lit edge.

    Every edge inside the covered interval is crossed at least once and can be
    toggled on any crossing, so only the interval matters.
    """
    x, h = g
    lo = min(0, h, (x[0] - 1) // 2) if x else min(0, h)
    hi = max(0, h, (x[-1] + 1) // 2) if x else max(0, h)
    return (hi - lo) + min(-lo + (hi - h), hi + (h - lo))


def mirror(g: tuple) -> tuple:
    """The automorphism reflecting the line; it swaps ``a <-> a^-1`` and ``b <-> b^-1``."""
    x, h = g
    return (tuple(sorted(-s for s in x)), -h)


MIRROR_LETTER = {0: 0, A_POS: A_NEG, A_NEG: A_POS, B_POS: B_NEG, B_NEG: B_POS}


class LamplighterModel(GroupModel):
    group_id = "lamplighter"
    names = ("e", "a", "b", "A", "B")

    def __init__(self):
        self.generators = (((), 0), ((), 1), ((1,), 1), ((), -1), ((-1,), -1))
        self._finish_init()

    def identity(self):
        return ((), 0)

    def mul(self, g, h):
        return lamp_mul(g, h)

    def inv(self, g):
        return lamp_inv(g)

    def neighbors(self, g):
        x, m = g
        left = 2 * m - 1
        right = 2 * m + 1
        return [(x, m + 1), (_xor(x, (right,)), m + 1),
                (x, m - 1), (_xor(x, (left,)), m - 1)]

    def is_element(self, g) -> bool:
        if not (isinstance(g, tuple) and len(g) == 2):
            return False
        x, m = g
        if not isinstance(m, int) or not isinstance(x, tuple):
            return False
        if not all(isinstance(s, int) and s % 2 == 1 for s in x):
            return False
        return all(p < q for p, q in zip(x, x[1:]))

    def encode(self, g) -> str:
        x, m = g
        return f"lamps={','.join(str(s) for s in x)};head={m}"

    def decode(self, text: str):
        try:
            lamps, hd = text.split(";")
            if not lamps.startswith("lamps=") or not hd.startswith("head="):
                raise ValueError
            body = lamps[len("lamps="):]
            x = tuple(sorted(int(s) for s in body.split(","))) if body else ()
            return (x, int(hd[len("head="):]))
        except ValueError:
            raise ValueError(f"bad lamplighter element {text!r}") from None

    def norm(self, g):
        return lamp_norm(g)

    def parse_word(self, text: str) -> Word:
        text = text.strip()
        if not text:
            return ()
        if " " in text:
            tokens = text.split()
        else:
            tokens = []
            i = 0
            while i < len(text):
                for size in (4, 2, 1):
                    if text[i:i + size] in _ALIASES:
                        tokens.append(text[i:i + size])
                        i += size
                        break
                else:
                    raise ValueError(f"unknown generator at {text[i:]!r}")
        try:
            return tuple(_ALIASES[t] for t in tokens)
        except KeyError as exc:
            raise ValueError(f"unknown generator name {exc.args[0]!r}") from None


LAMP = LamplighterModel()


def g_N(N: int) -> tuple:
    """Head at ``N`` with the single lamp ``-N + 1/2`` lit."""
    return ((-2 * N + 1,), N)


def lamplighter_horoball_family(N: int) -> tuple[tuple, int]:
    """Centre ``g_N`` and the origin-grazing radius ``3N - 1``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return g_N(N), 3 * N - 1


# -- geodesic ray language -------------------------------------------------------
#
# States: 0 start, 1/2 sweeping right (last letter a / b), 3/4 sweeping left
# (last letter a^-1 / b^-1), 5 turned left, 6 turned right, -1 reject.
_TRANS = {
    0: {A_POS: 1, B_POS: 2, A_NEG: 3, B_NEG: 4},
    1: {A_POS: 1, B_POS: 2, B_NEG: 5},
    2: {A_POS: 1, B_POS: 2, A_NEG: 5},
    3: {A_NEG: 3, B_NEG: 4, B_POS: 6},
    4: {A_NEG: 3, B_NEG: 4, A_POS: 6},
    5: {A_NEG: 5, B_NEG: 5},
    6: {A_POS: 6, B_POS: 6},
}


def lang_state(w: Word) -> int:
    state = 0
    for letter in w:
        state = _TRANS[state].get(letter, -1)
        if state < 0:
            return -1
    return state


def geodesic_lang_prefix_member(w: Word | str) -> bool:
    """Is ``w`` a prefix of a word in the geodesic ray language?

    The rays sweep one way, pivot once through ``ab^-1``/``ba^-1`` (or their
    mirror images) and then travel the other way for ever.
    """
    if isinstance(w, str):
        w = LAMP.parse_word(w)
    return lang_state(w) >= 0


# -- windows ---------------------------------------------------------------------

def window_elements(w: int) -> list[tuple]:
    """Heads in ``[-w, w]`` and lit edges inside ``[-w, w]``."""
    slots = list(range(-2 * w + 1, 2 * w, 2))
    out = []
    for mask in range(1 << len(slots)):
        lamps = tuple(s for i, s in enumerate(slots) if mask >> i & 1)
        for h in range(-w, w + 1):
            out.append((lamps, h))
    return out
