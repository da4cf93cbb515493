"""Self-overlapping test for closed polygons.

A polygon ``v_0 .. v_{m-1}`` bounds an immersed disk exactly when the abstract
m-gon admits a triangulation by diagonals in which every triangle is
positively oriented and, at each vertex, the triangle angles add up to the
interior angle of the polygon there (rather than that angle plus a full
turn).  Angle sums split cleanly over sub-polygons ``v_i .. v_j`` closed by
the chord ``v_j v_i``, which gives an O(m^3) interval dynamic program.

Negative curves are handled by testing the reversed polygon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .arrangement import whitney_index
from .curve import DEFAULT_TOL, ClosedPolyCurve
from .errors import InconsistentWitness, NumericalInstability

TWO_PI = 2.0 * math.pi
# triangles flatter than this are treated as degenerate
MIN_TRIANGLE_SINE = 1e-10


@dataclass
class ImmersionWitness:
    """Triangles of an immersed disk bounded by ``polygon``.

    ``triangles`` index into ``polygon`` and are listed counter-clockwise in
    the orientation of the tested polygon; ``sign`` tells whether that was the
    polygon itself (+1) or its reversal (-1).
    """

    polygon: np.ndarray
    triangles: list
    sign: int
    coverage: dict = field(default_factory=dict)

    def triangle_points(self) -> np.ndarray:
        return self.polygon[np.asarray(self.triangles, dtype=int)]

    def to_document(self) -> dict:
        return {
            "sign": self.sign,
            "triangles": [[[float(x), float(y)] for x, y in tri] for tri in self.triangle_points()],
        }


@dataclass
class SelfOverlapReport:
    is_self_overlapping: bool
    witness: Optional[ImmersionWitness]
    whitney: int


def _clean(poly: np.ndarray) -> np.ndarray:
    keep = [0]
    for k in range(1, len(poly)):
        if not np.array_equal(poly[k], poly[keep[-1]]):
            keep.append(k)
    out = poly[keep]
    while len(out) > 1 and np.array_equal(out[0], out[-1]):
        out = out[:-1]
    return out


def _ccw_angle(angles, v, a, b):
    """Counter-clockwise angle at ``v`` from direction ``v->a`` to ``v->b``."""
    return (angles[v, b] - angles[v, a]) % TWO_PI


def _triangulate_positive(P: np.ndarray, min_sine: float):
    """Interval DP; returns the list of triangles or ``None``.

    A triangle counts as positive when the sine of its angle at the chord's
    first vertex exceeds ``min_sine``; the test is scale-free, so pieces with
    very small features (from perturbed inputs) are treated like large ones.
    """
    m = len(P)
    if m < 3:
        return None
    diff = P[None, :, :] - P[:, None, :]
    angles = np.arctan2(diff[:, :, 1], diff[:, :, 0])
    dist = np.hypot(diff[:, :, 0], diff[:, :, 1]).tolist()
    ang = angles.tolist()
    xs = P[:, 0].tolist()
    ys = P[:, 1].tolist()

    def ccw(v, a, b):
        return (ang[v][b] - ang[v][a]) % TWO_PI

    theta = [ccw(k, (k + 1) % m, (k - 1) % m) for k in range(m)]
    # ok[i][j] -> chosen apex k, or -1 for the trivial chord j == i + 1
    NONE = -2
    choice = [[NONE] * m for _ in range(m)]
    for i in range(m - 1):
        choice[i][i + 1] = -1
    for length in range(2, m):
        for i in range(0, m - length):
            j = i + length
            target_i = ccw(i, i + 1, j)
            target_j = ccw(j, i, j - 1)
            xi, yi, xj, yj = xs[i], ys[i], xs[j], ys[j]
            for k in range(i + 1, j):
                if choice[i][k] == NONE or choice[k][j] == NONE:
                    continue
                cr = (xk := xs[k]) - xi
                cr = cr * (yj - yi) - (ys[k] - yi) * (xj - xi)
                if cr <= min_sine * dist[i][k] * dist[i][j]:
                    continue
                # angle at v_i inside sub-polygon (i..j)
                s_i = (ccw(i, i + 1, k) if k > i + 1 else 0.0) + ccw(i, k, j)
                if s_i >= target_i + math.pi:
                    continue
                s_j = (ccw(j, k, j - 1) if j > k + 1 else 0.0) + ccw(j, i, k)
                if s_j >= target_j + math.pi:
                    continue
                s_k = (ccw(k, i, k - 1) if k > i + 1 else 0.0) + ccw(k, j, i) \
                    + (ccw(k, k + 1, j) if j > k + 1 else 0.0)
                if s_k >= theta[k] + math.pi:
                    continue
                choice[i][j] = k
                break
    if choice[0][m - 1] == NONE:
        return None
    triangles = []
    stack = [(0, m - 1)]
    while stack:
        i, j = stack.pop()
        k = choice[i][j]
        if k < 0:
            continue
        triangles.append((i, k, j))
        stack.append((i, k))
        stack.append((k, j))
    return triangles


def is_self_overlapping(curve, tol: float = DEFAULT_TOL, windings=None) -> SelfOverlapReport:
    """Decide whether ``curve`` (a ClosedPolyCurve or vertex array) bounds an immersed disk.

    ``windings``, when given, are the curve's winding numbers on the faces of
    some arrangement; mixed signs rule the curve out before the DP runs.
    """
    P = curve.ordered if isinstance(curve, ClosedPolyCurve) else _clean(np.asarray(curve, dtype=float))
    if len(P) < 3:
        return SelfOverlapReport(False, None, 0)
    try:
        w = whitney_index(P)
    except NumericalInstability:
        return SelfOverlapReport(False, None, 0)
    if w not in (1, -1):
        return SelfOverlapReport(False, None, w)
    if windings is not None:
        wn = np.asarray(windings)
        if (w == 1 and (wn < 0).any()) or (w == -1 and (wn > 0).any()):
            return SelfOverlapReport(False, None, w)
    Q = P if w == 1 else P[::-1].copy()
    tris = _triangulate_positive(Q, MIN_TRIANGLE_SINE)
    if tris is None:
        return SelfOverlapReport(False, None, w)
    if w == -1:
        # back to original indices; listing order flips so the triangles run
        # clockwise like the curve itself
        m = len(P)
        tris = [(m - 1 - c, m - 1 - b, m - 1 - a) for a, b, c in tris]
    return SelfOverlapReport(True, ImmersionWitness(P, tris, w), w)


def triangle_signed_areas(witness: ImmersionWitness) -> np.ndarray:
    T = witness.triangle_points()
    a, b, c = T[:, 0], T[:, 1], T[:, 2]
    return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))


def triangle_coverage(witness: ImmersionWitness, points: np.ndarray) -> np.ndarray:
    """Number of witness triangles containing each query point."""
    T = witness.triangle_points()
    pts = np.asarray(points, dtype=float)
    counts = np.zeros(len(pts), dtype=int)
    for tri in T:
        a, b, c = tri
        # orientation-independent containment by barycentric signs
        d1 = (b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0])
        d2 = (c[0] - b[0]) * (pts[:, 1] - b[1]) - (c[1] - b[1]) * (pts[:, 0] - b[0])
        d3 = (a[0] - c[0]) * (pts[:, 1] - c[1]) - (a[1] - c[1]) * (pts[:, 0] - c[0])
        inside = ((d1 > 0) & (d2 > 0) & (d3 > 0)) | ((d1 < 0) & (d2 < 0) & (d3 < 0))
        counts += inside
    return counts


def check_witness(witness: ImmersionWitness, analysis, rel_tol: float = 1e-7) -> dict:
    """Verify coverage == |winding| on every face; returns the coverage map."""
    samples = np.array([f.sample for f in analysis.faces])
    cov = triangle_coverage(witness, samples)
    signed = triangle_signed_areas(witness)
    if (np.sign(signed) != witness.sign).any():
        raise InconsistentWitness("witness triangles have mixed orientation")
    coverage = {}
    for f, k in zip(analysis.faces, cov):
        want = 0 if f.is_outer else abs(f.winding)
        if int(k) != want:
            raise InconsistentWitness(f"face {f.id}: coverage {int(k)} != |winding| {want}")
        coverage[f.id] = int(k)
    witness.coverage = coverage
    return coverage


def interior_area(witness: ImmersionWitness, analysis=None, rel_tol: float = 1e-7) -> float:
    """Multiplicity-weighted area of the immersed disk."""
    signed = triangle_signed_areas(witness)
    if (np.sign(signed) != witness.sign).any():
        raise InconsistentWitness("witness triangles have mixed orientation")
    total = math.fsum(abs(float(a)) for a in signed)
    if analysis is not None:
        check_witness(witness, analysis)
        if abs(total - analysis.winding_area) > rel_tol * max(1.0, analysis.winding_area):
            raise InconsistentWitness(
                f"triangle area {total} differs from winding area {analysis.winding_area}")
    return total


def contraction_order(witness: ImmersionWitness, base: int = 0) -> list:
    """Ear-by-ear collapse order ending with the triangle at ``base``.

    Each entry is ``(triangle, tip)``: removing the ear at vertex ``tip``
    leaves a smaller immersed disk whose boundary still passes through the
    base vertex.
    """
    tris = [tuple(t) for t in witness.triangles]
    remaining = list(range(len(witness.polygon)))
    alive = set(range(len(tris)))
    order = []
    while len(alive) > 1:
        pos = {v: k for k, v in enumerate(remaining)}
        r = len(remaining)
        picked = None
        for t in sorted(alive):
            verts = tris[t]
            for tip in verts:
                if tip == base:
                    continue
                k = pos[tip]
                prev, nxt = remaining[(k - 1) % r], remaining[(k + 1) % r]
                if set(verts) == {prev, tip, nxt}:
                    picked = (t, tip)
                    break
            if picked:
                break
        if picked is None:
            raise InconsistentWitness("no removable ear; witness is not a triangulation")
        t, tip = picked
        order.append((tris[t], tip))
        alive.discard(t)
        remaining.remove(tip)
    t = alive.pop()
    tip = next(v for v in tris[t] if v != base)
    order.append((tris[t], tip))
    return order
