"""Homotopy moves on signed Gauss codes.

A Gauss code lists the crossing labels in the order the curve passes them,
starting at the base point; each label occurs twice.  Only the destructive
moves have applicators: Ia removes a monogon (a label whose two occurrences
are adjacent) and IIa removes a bigon (two labels adjacent to each other at
both of their passages).  Ib, IIb and III exist as log record kinds only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .curve import DEFAULT_TOL, ClosedPolyCurve, detect_crossings
from .errors import MoveNotApplicable

MOVE_KINDS = ("Ia", "Ib", "IIa", "IIb", "III")


@dataclass(frozen=True)
class GaussCode:
    labels: tuple
    signs: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        counts = {}
        for x in self.labels:
            counts[x] = counts.get(x, 0) + 1
        bad = sorted(k for k, v in counts.items() if v != 2)
        if bad:
            raise ValueError(f"labels {bad} do not occur exactly twice")

    def __len__(self):
        return len(self.labels)

    @property
    def crossings(self) -> list:
        return sorted(set(self.labels))

    def positions(self, label) -> tuple:
        return tuple(i for i, x in enumerate(self.labels) if x == label)

    def without(self, *labels) -> "GaussCode":
        drop = set(labels)
        return GaussCode(tuple(x for x in self.labels if x not in drop),
                         {k: v for k, v in self.signs.items() if k not in drop})

    def to_document(self) -> dict:
        return {"code": list(self.labels), "signs": {str(k): v for k, v in sorted(self.signs.items())}}


def from_curve(curve: ClosedPolyCurve, crossings=None, tol: float = DEFAULT_TOL) -> GaussCode:
    if crossings is None:
        crossings = detect_crossings(curve, tol)
    passages = sorted([(c.t1, c.id) for c in crossings] + [(c.t2, c.id) for c in crossings])
    return GaussCode(tuple(cid for _, cid in passages), {c.id: c.sign for c in crossings})


def _cyclic_adjacent(i: int, j: int, m: int) -> bool:
    return (i - j) % m in (1, m - 1)


def find_monogons(code: GaussCode) -> list:
    m = len(code)
    out = []
    for label in code.crossings:
        i, j = code.positions(label)
        if _cyclic_adjacent(i, j, m):
            out.append(label)
    return out


def find_bigons(code: GaussCode) -> list:
    """Label pairs ``(a, b)`` adjacent to each other at both of their passages."""
    m = len(code)
    labs = code.labels
    pairs = {}
    for i in range(m):
        a, b = labs[i], labs[(i + 1) % m]
        if a != b:
            key = (min(a, b), max(a, b))
            pairs[key] = pairs.get(key, 0) + 1
    return sorted(k for k, v in pairs.items() if v >= 2)


def apply_Ia(code: GaussCode, label) -> GaussCode:
    if label not in find_monogons(code):
        raise MoveNotApplicable(f"no monogon at crossing {label}")
    return code.without(label)


def apply_IIa(code: GaussCode, labels) -> GaussCode:
    a, b = labels
    if (min(a, b), max(a, b)) not in find_bigons(code):
        raise MoveNotApplicable(f"crossings {a} and {b} do not bound a bigon")
    return code.without(a, b)


def reduce_code(code: GaussCode, max_steps: int = 1000):
    """Greedily apply Ia/IIa moves; returns ``(final code, moves)``."""
    moves = []
    for _ in range(max_steps):
        mono = find_monogons(code)
        if mono:
            code = apply_Ia(code, mono[0])
            moves.append(("Ia", (mono[0],)))
            continue
        big = find_bigons(code)
        if big:
            code = apply_IIa(code, big[0])
            moves.append(("IIa", big[0]))
            continue
        break
    return code, moves
