"""Planar subdivision induced by a normal curve.

Faces are traced on a half-edge structure whose vertices are the curve
corners plus the crossing points.  Each face gets its area, a guaranteed
interior sample point and the winding number of the curve around it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import (
    DEFAULT_TOL,
    ClosedPolyCurve,
    CurveArcs,
    build_arcs,
    detect_crossings,
)
from .errors import NumericalInstability, OnCurve, TopologyError


@dataclass
class HalfEdgeStructure:
    vertices: np.ndarray          # (V, 2)
    origin: np.ndarray            # half-edge -> vertex id
    twin: np.ndarray
    next: np.ndarray
    forward: np.ndarray           # True when the half-edge follows the curve direction
    face_of: np.ndarray           # half-edge -> face id
    cycles: list                  # face id -> list of half-edge ids

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.origin) // 2

    @property
    def n_faces(self) -> int:
        return len(self.cycles)

    def cycle_points(self, face: int) -> np.ndarray:
        return self.vertices[self.origin[self.cycles[face]]]


@dataclass
class Face:
    id: int
    boundary: list
    area: float
    winding: int
    is_outer: bool
    samples: np.ndarray = field(repr=False)

    @property
    def sample(self) -> np.ndarray:
        return self.samples[0]


@dataclass
class CurveAnalysis:
    curve: ClosedPolyCurve
    crossings: list
    arrangement: HalfEdgeStructure
    faces: list
    whitney: int
    winding_area: float
    arcs: CurveArcs = field(repr=False, default=None)

    @property
    def outer(self) -> Face:
        return next(f for f in self.faces if f.is_outer)

    @property
    def bounded(self) -> list:
        return [f for f in self.faces if not f.is_outer]

    def face_areas(self) -> np.ndarray:
        return np.array([f.area for f in self.faces])

    def face_windings(self) -> np.ndarray:
        return np.array([f.winding for f in self.faces], dtype=int)


def _shoelace(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def build_arrangement(curve: ClosedPolyCurve, crossings=None,
                      tol: float = DEFAULT_TOL) -> HalfEdgeStructure:
    """Half-edge structure with faces traced counter-clockwise (face on the left)."""
    if crossings is None:
        crossings = detect_crossings(curve, tol)
    P = curve.ordered
    m = len(P)
    verts = [tuple(p) for p in P]
    # crossings on each segment, ordered by fraction along the segment
    on_segment = {s: [] for s in range(m)}
    for c in crossings:
        vid = len(verts)
        verts.append(tuple(c.location))
        on_segment[int(math.floor(c.t1))].append((c.t1 % 1.0, vid))
        on_segment[int(math.floor(c.t2))].append((c.t2 % 1.0, vid))
    edges = []
    for s in range(m):
        chain = [s] + [vid for _, vid in sorted(on_segment[s])] + [(s + 1) % m]
        edges.extend(zip(chain[:-1], chain[1:]))
    V = np.asarray(verts, dtype=float)
    E = len(edges)
    origin = np.empty(2 * E, dtype=int)
    for e, (u, v) in enumerate(edges):
        origin[2 * e] = u
        origin[2 * e + 1] = v
    twin = np.arange(2 * E) ^ 1
    forward = (np.arange(2 * E) % 2) == 0
    dest = origin[twin]
    d = V[dest] - V[origin]
    angle = np.arctan2(d[:, 1], d[:, 0])
    outgoing = {}
    for h in range(2 * E):
        outgoing.setdefault(int(origin[h]), []).append(h)
    nxt = np.empty(2 * E, dtype=int)
    for v, hs in outgoing.items():
        hs.sort(key=lambda h: angle[h])
        pos = {h: k for k, h in enumerate(hs)}
        for h in hs:
            # the half-edge arriving at v is twin(h); leave along the next
            # clockwise outgoing edge so the face stays on the left
            k = pos[h]
            nxt[twin[h]] = hs[(k - 1) % len(hs)]
    face_of = -np.ones(2 * E, dtype=int)
    cycles = []
    for h in range(2 * E):
        if face_of[h] >= 0:
            continue
        cyc = []
        g = h
        while face_of[g] < 0:
            face_of[g] = len(cycles)
            cyc.append(g)
            g = nxt[g]
        if g != h:
            raise TopologyError("half-edge walk did not close")
        cycles.append(cyc)
    if len(V) - E + len(cycles) != 2:
        raise TopologyError(
            f"Euler check failed: V={len(V)} E={E} F={len(cycles)}")
    return HalfEdgeStructure(V, origin, twin, nxt, forward, face_of, cycles)


def winding_number_at(point, curve, tol: float = DEFAULT_TOL) -> int:
    """Signed crossing count of a rightward ray; ``curve`` may be a vertex array."""
    pts = curve.ordered if isinstance(curve, ClosedPolyCurve) else np.asarray(curve, dtype=float)
    p = np.asarray(point, dtype=float)
    a = pts
    b = np.roll(pts, -1, axis=0)
    ab = b - a
    L2 = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", p - a, ab) / np.where(L2 > 0, L2, 1.0), 0.0, 1.0)
    dist = np.hypot(*(a + t[:, None] * ab - p).T)
    if dist.min() <= tol:
        raise OnCurve(f"point {tuple(p)} lies on the curve")
    return int(_ray_crossings(p, a, b).sum())


def _ray_crossings(p, a, b) -> np.ndarray:
    """Per-segment signed contributions to the winding number around ``p``."""
    is_left = (b[:, 0] - a[:, 0]) * (p[1] - a[:, 1]) - (p[0] - a[:, 0]) * (b[:, 1] - a[:, 1])
    up = (a[:, 1] <= p[1]) & (b[:, 1] > p[1]) & (is_left > 0)
    down = (a[:, 1] > p[1]) & (b[:, 1] <= p[1]) & (is_left < 0)
    return up.astype(int) - down.astype(int)


def arc_winding_matrix(samples: np.ndarray, structure: CurveArcs) -> np.ndarray:
    """``R[f, a]``: contribution of arc ``a`` to the winding number at sample ``f``.

    Summing the columns of any closed walk of arcs gives its exact winding
    number at every sample.
    """
    R = np.zeros((len(samples), len(structure.arcs)), dtype=int)
    for arc in structure.arcs:
        poly = np.asarray(arc.polyline, dtype=float)
        a, b = poly[:-1], poly[1:]
        for f, p in enumerate(samples):
            R[f, arc.id] = int(_ray_crossings(p, a, b).sum())
    return R


def _segments_of(curve: ClosedPolyCurve):
    P = curve.ordered
    return P, np.roll(P, -1, axis=0)


def _dist_to_segments(p, A, B) -> np.ndarray:
    ab = B - A
    L2 = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", p - A, ab) / np.where(L2 > 0, L2, 1.0), 0.0, 1.0)
    return np.hypot(*(A + t[:, None] * ab - p).T)


def _face_samples(hes: HalfEdgeStructure, face: int, A, B, count: int = 3) -> np.ndarray:
    """Points just left of boundary-edge midpoints, inside the face by construction.

    The offset is kept below the distance from the midpoint to every other
    curve segment, so the sample cannot leave the face.
    """
    cands = []
    for h in hes.cycles[face]:
        u = hes.vertices[hes.origin[h]]
        v = hes.vertices[hes.origin[hes.twin[h]]]
        mid = 0.5 * (u + v)
        d = v - u
        length = float(np.hypot(*d))
        if length == 0:
            continue
        normal = np.array([-d[1], d[0]]) / length
        dist = _dist_to_segments(mid, A, B)
        # the segment carrying this edge is at distance ~0; ignore it
        others = np.sort(dist)[1:] if len(dist) > 1 else np.array([length])
        clearance = min(float(others[0]) if len(others) else length, 0.5 * length)
        cands.append((clearance, mid + 0.25 * clearance * normal))
    cands.sort(key=lambda c: -c[0])
    pts = [c[1] for c in cands[:count]]
    while len(pts) < count:
        pts.append(pts[-1])
    return np.asarray(pts)


def face_windings(curve: ClosedPolyCurve, hes: HalfEdgeStructure, tol: float = DEFAULT_TOL) -> list:
    """Faces with area, samples and winding number taken at an interior sample."""
    A, B = _segments_of(curve)
    areas = [_shoelace(hes.cycle_points(f)) for f in range(len(hes.cycles))]
    # the unbounded face is the only clockwise cycle; rounding can make a
    # microscopic bounded face look slightly negative, so take the most
    # negative one and check that it clearly dominates
    outer_id = int(np.argmin(areas))
    if areas[outer_id] >= 0:
        raise TopologyError("no clockwise (unbounded) face cycle")
    faces = []
    for f, cyc in enumerate(hes.cycles):
        samples = _face_samples(hes, f, A, B)
        outer = f == outer_id
        if not outer and areas[f] < -1e-9 * abs(areas[outer_id]):
            raise TopologyError("expected exactly one outer face")
        wn = 0 if outer else winding_number_at(samples[0], curve, tol=0.0)
        faces.append(Face(f, list(cyc), 0.0 if outer else abs(areas[f]), wn, outer, samples))
    return faces


def winding_area(analysis_or_faces) -> float:
    faces = analysis_or_faces.faces if isinstance(analysis_or_faces, CurveAnalysis) else analysis_or_faces
    return math.fsum(abs(f.winding) * f.area for f in faces if not f.is_outer)


def whitney_index(curve, tol: float = 0.25) -> int:
    """Turning number from the sum of signed exterior angles."""
    P = curve.ordered if isinstance(curve, ClosedPolyCurve) else np.asarray(curve, dtype=float)
    d = np.roll(P, -1, axis=0) - P
    ang = np.arctan2(d[:, 1], d[:, 0])
    turn = np.diff(np.concatenate([ang, ang[:1]]))
    turn = (turn + math.pi) % (2 * math.pi) - math.pi
    total = turn.sum() / (2 * math.pi)
    k = int(round(total))
    if abs(total - k) >= tol:
        raise NumericalInstability(f"turning sum {total:.3f} is not close to an integer")
    return k


def analyze(curve: ClosedPolyCurve, tol: float = DEFAULT_TOL) -> CurveAnalysis:
    crossings = detect_crossings(curve, tol)
    hes = build_arrangement(curve, crossings, tol)
    faces = face_windings(curve, hes, tol)
    return CurveAnalysis(
        curve=curve,
        crossings=crossings,
        arrangement=hes,
        faces=faces,
        whitney=whitney_index(curve),
        winding_area=winding_area(faces),
        arcs=build_arcs(curve, crossings, tol),
    )
