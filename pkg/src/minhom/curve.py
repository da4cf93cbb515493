"""Closed polygonal curves, crossing detection and subcurve surgery.

Curve parameters are measured from the base point: a parameter ``t`` means
"segment ``floor(t)`` of the base-ordered vertex list, fraction ``t % 1``
along it".  Crossings are numbered 1..n in order of first visit from the base
point; the base point itself is label 0.
"""

from __future__ import annotations

import io
import json
import math
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateInput,
    NormalityViolation,
    NotASelfCrossing,
    ParseError,
    PerturbationFailed,
)

DEFAULT_TOL = 1e-9
# sine of the smallest crossing angle accepted as transverse
MIN_CROSSING_SINE = 1e-7
MAX_PERTURB_ROUNDS = 32


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True, eq=False)
class ClosedPolyCurve:
    """Closed polygon ``points[0] -> ... -> points[-1] -> points[0]``."""

    points: tuple
    base_index: int = 0
    notes: tuple = ()

    def __post_init__(self):
        pts = tuple(Point2(float(x), float(y)) for x, y in self.points)
        if len(pts) < 3:
            raise DegenerateInput(f"a closed curve needs at least 3 points, got {len(pts)}")
        for p in pts:
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise DegenerateInput(f"non-finite coordinate {p}")
        for i, p in enumerate(pts):
            q = pts[(i + 1) % len(pts)]
            if p == q:
                raise DegenerateInput(f"repeated consecutive point {p} at index {i}")
        if not 0 <= self.base_index < len(pts):
            raise DegenerateInput(f"base_index {self.base_index} out of range")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, ClosedPolyCurve):
            return NotImplemented
        return self.points == other.points and self.base_index == other.base_index

    def __hash__(self):
        return hash((self.points, self.base_index))

    @property
    def base_point(self) -> Point2:
        return self.points[self.base_index]

    @property
    def ordered(self) -> np.ndarray:
        """Vertices as an (m, 2) array starting at the base point."""
        arr = np.asarray(self.points, dtype=float)
        return np.roll(arr, -self.base_index, axis=0)

    @property
    def scale(self) -> float:
        arr = np.asarray(self.points, dtype=float)
        return float(np.hypot(*(arr.max(axis=0) - arr.min(axis=0))))

    def signed_area(self) -> float:
        arr = self.ordered
        x, y = arr[:, 0], arr[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    def to_document(self) -> dict:
        return {"points": [[p.x, p.y] for p in self.points], "base_index": self.base_index}

    def transformed(self, matrix=((1.0, 0.0), (0.0, 1.0)), offset=(0.0, 0.0)) -> "ClosedPolyCurve":
        arr = np.asarray(self.points) @ np.asarray(matrix, dtype=float).T + np.asarray(offset)
        return ClosedPolyCurve(tuple(map(tuple, arr)), self.base_index)


@dataclass(frozen=True)
class OpenPolyline:
    points: tuple

    def __post_init__(self):
        pts = tuple(Point2(float(x), float(y)) for x, y in self.points)
        if len(pts) < 2:
            raise DegenerateInput("an open polyline needs at least 2 points")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class Crossing:
    id: int
    location: Point2
    t1: float
    t2: float
    sign: int
    seg1: int
    seg2: int


@dataclass(frozen=True)
class Arc:
    """Piece of the curve between two consecutive passages.

    ``start``/``end`` are ``(crossing id, strand)`` with strand 1 for the
    passage at ``t1`` and 2 for the passage at ``t2``; the base point is
    ``(0, 0)``.
    """

    id: int
    start: tuple
    end: tuple
    polyline: tuple
    param_interval: tuple

    @property
    def from_crossing(self) -> int:
        return self.start[0]

    @property
    def to_crossing(self) -> int:
        return self.end[0]


@dataclass(frozen=True)
class SubcurveRef:
    """Closed walk through consecutive arcs, based at ``root``."""

    arcs: tuple
    root: int = 0

    @property
    def key(self) -> tuple:
        """Rotation starting at the smallest arc id; unique per subcurve."""
        i = self.arcs.index(min(self.arcs))
        return self.arcs[i:] + self.arcs[:i]


# ----------------------------------------------------------------------------
# loading

def _read_document(source):
    if isinstance(source, dict):
        return source
    try:
        if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("{"):
            if str(source) == "-":
                import sys
                return json.load(sys.stdin)
            with open(source) as fh:
                return json.load(fh)
        if isinstance(source, str):
            return json.loads(source)
        if isinstance(source, io.IOBase) or hasattr(source, "read"):
            return json.load(source)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from exc
    raise ParseError(f"cannot read a curve document from {type(source).__name__}")


def _parse_points(doc) -> list:
    pts = doc.get("points") if isinstance(doc, dict) else None
    if not isinstance(pts, list):
        raise ParseError("document needs a 'points' list")
    out = []
    for p in pts:
        if not (isinstance(p, (list, tuple)) and len(p) == 2):
            raise ParseError(f"bad point entry {p!r}")
        try:
            out.append((float(p[0]), float(p[1])))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad point entry {p!r}") from exc
    return out


def load_document(source, tol: float = DEFAULT_TOL):
    """Load a closed curve or, for ``"closed": false`` documents, an open polyline."""
    doc = _read_document(source)
    pts = _parse_points(doc)
    if doc.get("closed", True) is False:
        return OpenPolyline(tuple(pts))
    return load_curve(doc, tol=tol)


def load_curve(source, tol: float = DEFAULT_TOL) -> ClosedPolyCurve:
    doc = _read_document(source)
    pts = _parse_points(doc)
    if doc.get("closed", True) is False:
        raise ParseError("expected a closed curve document")
    base = doc.get("base_index", 0)
    if not isinstance(base, int):
        raise ParseError("base_index must be an integer")
    if len(pts) < 3:
        raise DegenerateInput(f"a closed curve needs at least 3 points, got {len(pts)}")
    curve = ClosedPolyCurve(tuple(pts), base % len(pts))
    return _relocate_base(curve, tol)


def _relocate_base(curve: ClosedPolyCurve, tol: float) -> ClosedPolyCurve:
    """Move the base to a vertex that does not touch a non-incident edge."""
    arr = np.asarray(curve.points)
    m = len(arr)

    def touches(i):
        p = arr[i]
        for s in range(m):
            if s == i or (s + 1) % m == i:
                continue
            if _point_segment_distance(p, arr[s], arr[(s + 1) % m]) <= tol:
                return True
        return False

    if not touches(curve.base_index):
        return curve
    for k in range(1, m):
        cand = (curve.base_index + k) % m
        if not touches(cand):
            note = f"base point relocated from index {curve.base_index} to {cand}"
            return ClosedPolyCurve(curve.points, cand, curve.notes + (note,))
    return curve


# ----------------------------------------------------------------------------
# predicates

def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _point_segment_distance(p, a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.hypot(*(a + t * ab - p)))


def _segment_contacts(P, tol):
    """Yield ``(i, j, kind, payload)`` for every contact between segments."""
    m = len(P)
    for i in range(m):
        a, b = P[i], P[(i + 1) % m]
        r = b - a
        lr = math.hypot(r[0], r[1])
        for j in range(i + 1, m):
            c, d = P[j], P[(j + 1) % m]
            s = d - c
            ls = math.hypot(s[0], s[1])
            adjacent = j == i + 1 or (i == 0 and j == m - 1)
            if adjacent:
                # shared vertex; reject folds back onto the previous segment
                if j == i + 1:
                    u, v, shared = r, s, (i + 1) % m
                else:
                    u, v, shared = s, r, 0
                cr = _cross(u[0], u[1], v[0], v[1])
                if abs(cr) <= MIN_CROSSING_SINE * lr * ls and u @ v < 0:
                    yield i, j, "fold", (shared,)
                continue
            # any endpoint touching the other segment
            touching = []
            for vi, p in ((i, a), ((i + 1) % m, b)):
                if _point_segment_distance(p, c, d) <= tol:
                    touching.append(vi)
            for vi, p in ((j, c), ((j + 1) % m, d)):
                if _point_segment_distance(p, a, b) <= tol:
                    touching.append(vi)
            den = _cross(r[0], r[1], s[0], s[1])
            if touching:
                kind = "overlap" if abs(den) <= MIN_CROSSING_SINE * lr * ls else "vertex"
                yield i, j, kind, tuple(touching)
                continue
            if abs(den) <= MIN_CROSSING_SINE * lr * ls:
                continue  # parallel and separated (collinear overlap caught above)
            qp = c - a
            t = _cross(qp[0], qp[1], s[0], s[1]) / den
            u = _cross(qp[0], qp[1], r[0], r[1]) / den
            if 0.0 < t < 1.0 and 0.0 < u < 1.0:
                yield i, j, "cross", (t, u, den / (lr * ls))


def detect_crossings(curve: ClosedPolyCurve, tol: float = DEFAULT_TOL) -> list:
    """All transverse self-crossings, numbered by first visit from the base."""
    P = curve.ordered
    raw = []
    problems = []
    for i, j, kind, payload in _segment_contacts(P, tol):
        if kind != "cross":
            problems.append((i, j, kind, payload))
            continue
        t, u, sine = payload
        if abs(sine) < MIN_CROSSING_SINE:
            problems.append((i, j, "tangent", (i,)))
            continue
        loc = P[i] + t * (P[(i + 1) % len(P)] - P[i])
        raw.append((float(i + t), float(j + u), loc, 1 if sine > 0 else -1, i, j))
    # two crossings at one location means a triple point
    for a in range(len(raw)):
        for b in range(a + 1, len(raw)):
            if np.hypot(*(raw[a][2] - raw[b][2])) <= tol:
                problems.append((raw[a][4], raw[b][5], "triple", (raw[a][4],)))
    if problems:
        kinds = sorted({p[2] for p in problems})
        raise NormalityViolation(f"curve is not normal ({', '.join(kinds)})", problems)
    raw.sort(key=lambda r: r[0])
    return [
        Crossing(k + 1, Point2(float(loc[0]), float(loc[1])), t1, t2, sign, s1, s2)
        for k, (t1, t2, loc, sign, s1, s2) in enumerate(raw)
    ]


def is_normal(curve: ClosedPolyCurve, tol: float = DEFAULT_TOL) -> bool:
    try:
        detect_crossings(curve, tol)
    except NormalityViolation:
        return False
    return True


def _direction_for(curve_pts, idx, seed, attempt):
    """Pseudo-random unit vector keyed on the vertex and its unordered neighbours.

    Keying on geometry instead of the index makes a curve and its reversal
    receive identical perturbations.
    """
    m = len(curve_pts)
    p = curve_pts[idx]
    nbrs = sorted([tuple(curve_pts[(idx - 1) % m]), tuple(curve_pts[(idx + 1) % m])])
    key = repr((seed, attempt, tuple(p), nbrs)).encode()
    rng = np.random.default_rng(zlib.crc32(key))
    ang = rng.uniform(0.0, 2.0 * math.pi)
    mag = rng.uniform(0.5, 1.0)
    return mag * np.array([math.cos(ang), math.sin(ang)])


def perturb_to_normal(curve: ClosedPolyCurve, epsilon: float, seed: int = 0,
                      tol: float = DEFAULT_TOL) -> ClosedPolyCurve:
    """Move offending vertices by at most ``epsilon`` until the curve is normal.

    Every vertex is displaced from its original position, so the Hausdorff
    distance to the input stays below ``epsilon``.
    """
    try:
        detect_crossings(curve, tol)
        return curve
    except NormalityViolation as exc:
        problems = exc.params
    if epsilon <= 0:
        raise PerturbationFailed("epsilon must be positive to repair a degenerate curve")
    original = np.asarray(curve.points, dtype=float)
    m = len(original)
    base = curve.base_index
    current = original.copy()
    moved = {}
    for attempt in range(MAX_PERTURB_ROUNDS):
        for i, j, kind, payload in problems:
            # payload vertex indices are in base-ordered numbering
            for v in payload[:1] if kind != "fold" else payload:
                if isinstance(v, float):
                    continue
                vid = (int(v) + base) % m
                moved[vid] = moved.get(vid, 0) + 1
                d = _direction_for(original, vid, seed, attempt + moved[vid])
                current[vid] = original[vid] + epsilon * d
        try:
            cand = ClosedPolyCurve(tuple(map(tuple, current)), base, curve.notes)
        except DegenerateInput:
            continue
        try:
            detect_crossings(cand, tol)
            note = f"perturbed {len(moved)} vertex(es) by <= {epsilon:g}"
            return ClosedPolyCurve(cand.points, base, curve.notes + (note,))
        except NormalityViolation as exc:
            problems = exc.params
    raise PerturbationFailed(f"curve still degenerate after {MAX_PERTURB_ROUNDS} rounds")


# ----------------------------------------------------------------------------
# arcs and subcurves

@dataclass
class CurveArcs:
    """Arc decomposition of a normal curve at its crossings and base point."""

    curve: ClosedPolyCurve
    crossings: list
    arcs: list
    # passage (crossing id, strand) -> id of the arc that leaves it
    leaving: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.crossings)

    def crossing(self, cid: int) -> Crossing:
        return self.crossings[cid - 1]

    def location(self, cid: int) -> np.ndarray:
        if cid == 0:
            return np.asarray(self.curve.base_point, dtype=float)
        return np.asarray(self.crossings[cid - 1].location, dtype=float)

    def whole(self) -> SubcurveRef:
        return SubcurveRef(tuple(range(len(self.arcs))), 0)

    def successor(self, arc_id: int, smoothed=frozenset()) -> int:
        cid, strand = self.arcs[arc_id].end
        if cid in smoothed:
            return self.leaving[(cid, 3 - strand)]
        return self.leaving[(cid, strand)]

    def junctions(self, ref: SubcurveRef):
        """Yield ``(position, crossing id, kind)`` for each consecutive arc pair."""
        k = len(ref.arcs)
        for pos in range(k):
            a = self.arcs[ref.arcs[pos]]
            b = self.arcs[ref.arcs[(pos + 1) % k]]
            if a.end == b.start:
                yield pos, a.end[0], "through"
            elif a.end[0] == b.start[0]:
                yield pos, a.end[0], "corner"
            else:
                raise ValueError(f"arcs {a.id} and {b.id} are not consecutive")

    def interior_crossings(self, ref: SubcurveRef) -> list:
        seen = {}
        for _, cid, kind in self.junctions(ref):
            if kind == "through" and cid != 0:
                seen[cid] = seen.get(cid, 0) + 1
        return sorted(c for c, k in seen.items() if k == 2)

    def corners(self, ref: SubcurveRef) -> list:
        return [cid for _, cid, kind in self.junctions(ref) if kind == "corner"]

    def contains_base(self, ref: SubcurveRef) -> bool:
        return 0 in ref.arcs

    def polygon(self, ref: SubcurveRef, start_at_root: bool = True) -> np.ndarray:
        """Vertex array of the subcurve, starting at its root when requested."""
        arcs = list(ref.arcs)
        if start_at_root:
            arcs = self._rotate_to_root(ref)
        pts = []
        for aid in arcs:
            poly = self.arcs[aid].polyline
            pts.extend(poly[:-1])
        return np.asarray(pts, dtype=float)

    def _rotate_to_root(self, ref: SubcurveRef) -> list:
        arcs = list(ref.arcs)
        k = len(arcs)
        if ref.root == 0:
            if 0 in arcs:
                i = arcs.index(0)
                return arcs[i:] + arcs[:i]
            return arcs
        for pos, cid, kind in self.junctions(ref):
            if cid == ref.root:
                i = (pos + 1) % k
                return arcs[i:] + arcs[:i]
        return arcs

    def root_of(self, ref: SubcurveRef) -> int:
        """Root rule: first point of the subcurve met when walking from the base."""
        if 0 in ref.arcs:
            return 0
        first = min(ref.arcs)
        return self.arcs[first].start[0]

    def smooth(self, crossing_ids) -> list:
        """Pieces obtained by smoothing every crossing in ``crossing_ids``."""
        smoothed = frozenset(crossing_ids)
        unseen = set(range(len(self.arcs)))
        pieces = []
        while unseen:
            start = min(unseen)
            walk = [start]
            unseen.discard(start)
            nxt = self.successor(start, smoothed)
            while nxt != start:
                walk.append(nxt)
                unseen.discard(nxt)
                nxt = self.successor(nxt, smoothed)
            ref = SubcurveRef(tuple(walk), 0)
            pieces.append(SubcurveRef(ref.arcs, self.root_of(ref)))
        return pieces


def build_arcs(curve: ClosedPolyCurve, crossings: Optional[Sequence[Crossing]] = None,
               tol: float = DEFAULT_TOL) -> CurveArcs:
    """Cut the curve at the base point and at every crossing passage."""
    if crossings is None:
        crossings = detect_crossings(curve, tol)
    P = curve.ordered
    m = len(P)
    passages = []
    for c in crossings:
        passages.append((c.t1, (c.id, 1), np.asarray(c.location, dtype=float)))
        passages.append((c.t2, (c.id, 2), np.asarray(c.location, dtype=float)))
    passages.sort(key=lambda p: p[0])
    cuts = [(0.0, (0, 0), P[0])] + passages + [(float(m), (0, 0), P[0])]
    arcs = []
    for k in range(len(cuts) - 1):
        ta, sa, la = cuts[k]
        tb, sb, lb = cuts[k + 1]
        pts = [tuple(la)]
        first_vertex = math.floor(ta) + 1
        last_vertex = math.ceil(tb) - 1 if tb != math.floor(tb) else int(tb) - 1
        for v in range(first_vertex, last_vertex + 1):
            if v >= m:
                break
            pts.append(tuple(P[v]))
        pts.append(tuple(lb))
        arcs.append(Arc(k, sa, sb, tuple(Point2(*p) for p in pts), (ta, tb)))
    leaving = {a.start: a.id for a in arcs if a.start != (0, 0)}
    leaving[(0, 0)] = 0
    return CurveArcs(curve, list(crossings), arcs, leaving)


def split_at_crossing(structure: CurveArcs, ref: SubcurveRef, crossing: int):
    """Split a subcurve at one of its own crossings into two closed pieces."""
    through = [pos for pos, cid, kind in structure.junctions(ref)
               if cid == crossing and kind == "through"]
    if crossing == 0 or len(through) != 2:
        raise NotASelfCrossing(f"crossing {crossing} is not a self-crossing of this subcurve")
    i, j = through
    arcs = ref.arcs
    first = arcs[i + 1:j + 1]
    second = arcs[j + 1:] + arcs[:i + 1]
    return SubcurveRef(first, crossing), SubcurveRef(second, crossing)


# ----------------------------------------------------------------------------
# whole-curve operations

def reverse_curve(curve: ClosedPolyCurve) -> ClosedPolyCurve:
    """Same image, opposite orientation; the base point is kept."""
    pts = curve.points[::-1]
    return ClosedPolyCurve(pts, len(pts) - 1 - curve.base_index, curve.notes)


def _dedupe_cyclic(pts, tol):
    out = []
    for p in pts:
        if out and np.hypot(*(np.subtract(p, out[-1]))) <= tol:
            continue
        out.append(tuple(map(float, p)))
    while len(out) > 1 and np.hypot(*(np.subtract(out[0], out[-1]))) <= tol:
        out.pop()
    return out


def cancel_spurs(pts, tol: float = DEFAULT_TOL) -> list:
    """Remove back-tracking vertices ``a -> b -> c`` with ``c`` on segment ``ab``.

    Retracting a spur is a homotopy of zero area, so it never changes sigma.
    """
    pts = _dedupe_cyclic(pts, tol)
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        m = len(pts)
        for k in range(m):
            a = np.asarray(pts[k - 1])
            b = np.asarray(pts[k])
            c = np.asarray(pts[(k + 1) % m])
            ab, bc = b - a, c - b
            if abs(_cross(ab[0], ab[1], bc[0], bc[1])) <= tol * max(1.0, np.hypot(*ab) + np.hypot(*bc)) \
                    and float(ab @ bc) < 0:
                del pts[k]
                pts = _dedupe_cyclic(pts, tol)
                changed = True
                break
    return pts if len(pts) >= 3 else []


def concatenate_open(alpha: OpenPolyline, beta: OpenPolyline, join: str = "shared-endpoints",
                     epsilon: float = 1e-7, seed: int = 0,
                     tol: float = DEFAULT_TOL) -> Optional[ClosedPolyCurve]:
    """Closed curve running along ``alpha`` and back along ``beta``.

    Returns ``None`` when the loop cancels to a constant curve (for example
    ``alpha == beta``), whose homotopy area is zero.
    """
    if not isinstance(alpha, OpenPolyline):
        alpha = OpenPolyline(tuple(alpha))
    if not isinstance(beta, OpenPolyline):
        beta = OpenPolyline(tuple(beta))
    a = [tuple(p) for p in alpha.points]
    b = [tuple(p) for p in beta.points]
    if join == "shared-endpoints":
        if np.hypot(*np.subtract(a[0], b[0])) > tol or np.hypot(*np.subtract(a[-1], b[-1])) > tol:
            raise DegenerateInput("shared-endpoints join needs coinciding endpoints")
        seq = a + b[::-1][1:-1]
    elif join == "straight-line-join":
        seq = a + b[::-1]
    else:
        raise ValueError(f"unknown join policy {join!r}")
    pts = cancel_spurs(seq, tol)
    if not pts:
        return None
    curve = ClosedPolyCurve(tuple(pts), 0)
    return perturb_to_normal(curve, epsilon, seed=seed, tol=tol)
