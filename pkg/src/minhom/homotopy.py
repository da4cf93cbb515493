"""Minimum homotopy area by decomposition into self-overlapping pieces.

A curve that bounds an immersed disk can be contracted sweeping exactly its
winding area.  Otherwise some optimal nullhomotopy splits it at a crossing
into two closed curves that are contracted independently, which yields the
recursion

    sigma(C) = W(C)                                    if C is self-overlapping
    sigma(C) = min_i  sigma(C_i1) + sigma(C_i2)        over interior crossings i

evaluated here with memoisation on canonical subcurve keys.

All areas are integer combinations of face areas.  Pieces carry their
per-face winding vector, so the area of a decomposition is ``sum_f E(f) *
area(f)`` with ``E(f) = sum_i |wn(f, piece_i)|``; comparing two candidates
never mixes floating-point paths.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .arrangement import CurveAnalysis, analyze, arc_winding_matrix
from .curve import (
    DEFAULT_TOL,
    ClosedPolyCurve,
    OpenPolyline,
    SubcurveRef,
    concatenate_open,
    split_at_crossing,
)
from .errors import CapExceeded, InvalidDecomposition, NumericalInstability
from .selfoverlap import ImmersionWitness, contraction_order, is_self_overlapping

DEFAULT_CAP_CROSSINGS = 14
DEFAULT_ENUMERATE_BOUND = 12


def crossing_cap(cap: Optional[int] = None) -> int:
    """Recursion cap: explicit value, else ``MINHOM_CAP_CROSSINGS``, else 14."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("MINHOM_CAP_CROSSINGS")
    return int(env) if env else DEFAULT_CAP_CROSSINGS


# ----------------------------------------------------------------------------
# result types

@dataclass
class Piece:
    ref: SubcurveRef
    root: int
    sign: int
    witness: Optional[ImmersionWitness]
    windings: np.ndarray          # per face of the parent curve

    @property
    def arcs(self) -> tuple:
        return self.ref.arcs

    @property
    def winding_area_weights(self) -> np.ndarray:
        return np.abs(self.windings)


@dataclass
class Decomposition:
    """Ordered pieces; the root of piece i lies on no later piece."""

    analysis: CurveAnalysis = field(repr=False)
    pieces: list

    @property
    def roots(self) -> list:
        return [p.root for p in self.pieces]

    @property
    def anchor_set(self) -> frozenset:
        return frozenset([0] + self.roots)

    @property
    def smoothed(self) -> frozenset:
        return frozenset(r for r in self.roots if r != 0)

    def multiplicities(self) -> np.ndarray:
        """``E(f) = sum_i |wn(f, piece_i)|`` for every face."""
        if not self.pieces:
            return np.zeros(len(self.analysis.faces), dtype=int)
        return np.sum([p.winding_area_weights for p in self.pieces], axis=0)

    def to_document(self) -> dict:
        return {
            "pieces": [
                {"arcs": list(p.arcs), "root": p.root, "sign": p.sign}
                for p in self.pieces
            ],
            "anchor_set": sorted(self.anchor_set),
            "area": decomposition_area(self),
        }


@dataclass
class SigmaResult:
    sigma: float
    decomposition: Decomposition
    anchor_set: frozenset
    winding_area: float
    gap: float
    split: Optional[int] = None   # crossing chosen at the top level, if any

    def to_document(self) -> dict:
        return {
            "sigma": self.sigma,
            "winding_area": self.winding_area,
            "gap": self.gap,
            "anchor_set": sorted(self.anchor_set),
            "decomposition": self.decomposition.to_document(),
        }


@dataclass
class FaceSweepProfile:
    multiplicity: dict            # face id -> E_H(f)
    total: float


@dataclass
class MoveEvent:
    kind: str                     # "Ia", "IIa", "III", "Ib" or "IIb"
    crossings: tuple
    frame: int

    def to_document(self) -> dict:
        return {"move": self.kind, "crossings": list(self.crossings), "frame": self.frame}


@dataclass
class HomotopyFrames:
    frames: list                  # (m_k, 2) arrays; the last one is the base point
    move_log: list
    phases: list = field(default_factory=list)   # (piece index, first frame, last frame)

    def swept_area(self) -> float:
        return sweep_area(self.frames)


# ----------------------------------------------------------------------------
# solver

class CurveSolver:
    """Per-curve state: arcs, winding matrix and the memo tables."""

    def __init__(self, curve, tol: float = DEFAULT_TOL, cap: Optional[int] = None):
        self.analysis = curve if isinstance(curve, CurveAnalysis) else analyze(curve, tol)
        self.tol = tol
        self.structure = self.analysis.arcs
        n = self.structure.n
        limit = crossing_cap(cap)
        if n > limit:
            raise CapExceeded(f"curve has {n} crossings; the configured cap is {limit}")
        faces = self.analysis.faces
        self.areas = [0.0 if f.is_outer else f.area for f in faces]
        samples = np.array([f.sample for f in faces])
        self.R = arc_winding_matrix(samples, self.structure)
        self._so = {}
        self._memo = {}

    # -- per-piece quantities -------------------------------------------------

    def windings(self, ref: SubcurveRef) -> np.ndarray:
        return self.R[:, list(ref.arcs)].sum(axis=1)

    def area_of(self, weights) -> float:
        return math.fsum(int(w) * a for w, a in zip(weights, self.areas) if w)

    def winding_area(self, ref: SubcurveRef) -> float:
        return self.area_of(np.abs(self.windings(ref)))

    def self_overlap(self, ref: SubcurveRef):
        key = ref.key
        hit = self._so.get(key)
        if hit is None:
            poly = self.structure.polygon(SubcurveRef(key, 0), start_at_root=False)
            hit = is_self_overlapping(poly, self.tol, windings=self.windings(ref))
            self._so[key] = hit
        return hit

    def piece(self, ref: SubcurveRef, root: int) -> Piece:
        ref = SubcurveRef(ref.arcs, root)
        poly = self.structure.polygon(ref, start_at_root=True)
        wn = self.windings(ref)
        rep = is_self_overlapping(poly, self.tol, windings=wn)
        if not rep.is_self_overlapping:
            raise InvalidDecomposition(f"piece {ref.key} is not self-overlapping")
        return Piece(ref, root, rep.whitney, rep.witness, wn)

    # -- recursion ------------------------------------------------------------

    def sigma(self, ref: SubcurveRef):
        """``(value, E-vector, piece keys)`` of the best decomposition of a subcurve."""
        key = ref.key
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if self.self_overlap(ref).is_self_overlapping:
            E = np.abs(self.windings(ref))
            out = (self.area_of(E), E, (key,))
        else:
            interior = self.structure.interior_crossings(ref)
            if not interior:
                # a simple closed walk always bounds an embedded disk; getting
                # here means the DP rejected it on numerical grounds
                raise NumericalInstability(f"simple subcurve {key} rejected by the self-overlap test")
            out = None
            for c in interior:
                first, second = split_at_crossing(self.structure, ref, c)
                _, Ea, pa = self.sigma(first)
                _, Eb, pb = self.sigma(second)
                E = Ea + Eb
                value = self.area_of(E)
                if out is None or value < out[0]:
                    out = (value, E, pa + pb)
        self._memo[key] = out
        return out

    def decomposition(self, arc_sets) -> Decomposition:
        return build_decomposition(self, arc_sets)


def build_decomposition(solver: CurveSolver, arc_sets) -> Decomposition:
    """Order arc sets parent-first from the base piece and attach roots/witnesses."""
    st = solver.structure
    refs = [SubcurveRef(tuple(a), 0) for a in arc_sets]
    covered = sorted(itertools.chain.from_iterable(r.arcs for r in refs))
    if covered != list(range(len(st.arcs))):
        raise InvalidDecomposition("pieces do not partition the arcs of the curve")
    roots = [st.root_of(r) for r in refs]
    if sum(1 for r in roots if r == 0) != 1:
        raise InvalidDecomposition("exactly one piece must contain the base point")
    if len(set(roots)) != len(roots):
        raise InvalidDecomposition("two pieces share a root")
    corners = [set(st.corners(r)) for r in refs]
    # breadth-first from the base piece: children are rooted at one of the
    # parent's corners
    start = roots.index(0)
    order = [start]
    queue = deque([start])
    seen = {start}
    while queue:
        i = queue.popleft()
        kids = sorted((roots[j], j) for j in range(len(refs))
                      if j not in seen and roots[j] in corners[i])
        for _, j in kids:
            seen.add(j)
            order.append(j)
            queue.append(j)
    if len(order) != len(refs):
        raise InvalidDecomposition("pieces are not connected through their roots")
    pieces = [solver.piece(refs[i], roots[i]) for i in order]
    return Decomposition(solver.analysis, pieces)


def validate(d: Decomposition) -> None:
    st = d.analysis.arcs
    covered = sorted(itertools.chain.from_iterable(p.arcs for p in d.pieces))
    if covered != list(range(len(st.arcs))):
        raise InvalidDecomposition("pieces do not partition the arcs of the curve")
    if len(d.pieces) != len(d.smoothed) + 1:
        raise InvalidDecomposition("piece count must be one more than the number of roots")
    for i, p in enumerate(d.pieces):
        if p.witness is None:
            raise InvalidDecomposition(f"piece {i} has no self-overlap witness")
        later = set()
        for q in d.pieces[i + 1:]:
            later.update(c for _, c, _ in st.junctions(q.ref))
        if p.root != 0 and p.root in later:
            raise InvalidDecomposition(f"root {p.root} of piece {i} lies on a later piece")


# ----------------------------------------------------------------------------
# public operations

def _solver_for(curve, tol, cap) -> CurveSolver:
    if isinstance(curve, CurveSolver):
        return curve
    return CurveSolver(curve, tol=tol, cap=cap)


def min_homotopy_area(curve, tol: float = DEFAULT_TOL, cap: Optional[int] = None) -> SigmaResult:
    solver = _solver_for(curve, tol, cap)
    whole = solver.structure.whole()
    value, E, parts = solver.sigma(whole)
    d = build_decomposition(solver, parts)
    W = solver.analysis.winding_area
    top = None
    if len(parts) > 1:
        for c in solver.structure.interior_crossings(whole):
            a, b = split_at_crossing(solver.structure, whole, c)
            va, Ea, _ = solver.sigma(a)
            vb, Eb, _ = solver.sigma(b)
            if np.array_equal(Ea + Eb, E):
                top = c
                break
    return SigmaResult(value, d, d.anchor_set, W, value - W, top)


def sigma(curve, tol: float = DEFAULT_TOL, cap: Optional[int] = None) -> float:
    return min_homotopy_area(curve, tol, cap).sigma


def enumerate_valid_anchor_sets(curve, cap: int = DEFAULT_ENUMERATE_BOUND,
                                tol: float = DEFAULT_TOL) -> list:
    """Every decomposition into self-overlapping pieces, sorted by area.

    A set ``S`` of crossings is valid when smoothing all of them leaves
    exactly ``|S| + 1`` pieces, each self-overlapping.  Returns a list of
    ``(anchor set, Decomposition, area)``.
    """
    solver = _solver_for(curve, tol, max(cap, DEFAULT_CAP_CROSSINGS))
    n = solver.structure.n
    if n > cap:
        raise CapExceeded(f"curve has {n} crossings; enumeration bound is {cap}")
    found = []
    ids = range(1, n + 1)
    for size in range(n + 1):
        for S in itertools.combinations(ids, size):
            pieces = solver.structure.smooth(S)
            if len(pieces) != size + 1:
                continue
            if not all(solver.self_overlap(p).is_self_overlapping for p in pieces):
                continue
            E = np.sum([np.abs(solver.windings(p)) for p in pieces], axis=0)
            d = build_decomposition(solver, [p.arcs for p in pieces])
            found.append((frozenset((0,) + S), d, solver.area_of(E)))
    found.sort(key=lambda t: (t[2], sorted(t[0])))
    return found


def decomposition_area(d: Decomposition) -> float:
    """``sum_i W(piece_i)``, accumulated per face."""
    areas = [0.0 if f.is_outer else f.area for f in d.analysis.faces]
    E = d.multiplicities()
    return math.fsum(int(w) * a for w, a in zip(E, areas) if w)


def checked_decomposition_area(d: Decomposition) -> float:
    validate(d)
    return decomposition_area(d)


def is_k_boundary(curve, cap: int = DEFAULT_ENUMERATE_BOUND, tol: float = DEFAULT_TOL) -> Optional[int]:
    """Fewest positive self-overlapping pieces of any decomposition, or ``None``."""
    best = None
    for anchors, d, _ in enumerate_valid_anchor_sets(curve, cap=cap, tol=tol):
        if all(p.sign == 1 for p in d.pieces):
            k = len(d.pieces)
            best = k if best is None else min(best, k)
    return best


def sense_class(d: Decomposition) -> str:
    signs = {p.sign for p in d.pieces}
    if signs == {1}:
        return "left"
    if signs == {-1}:
        return "right"
    return "mixed"


def face_sweep_profile(d: Decomposition, analysis: Optional[CurveAnalysis] = None) -> FaceSweepProfile:
    analysis = analysis or d.analysis
    E = d.multiplicities()
    mult = {}
    for f, e in zip(analysis.faces, E):
        mult[f.id] = 0 if f.is_outer else int(e)
    total = math.fsum(mult[f.id] * f.area for f in analysis.faces if not f.is_outer)
    return FaceSweepProfile(mult, total)


# ----------------------------------------------------------------------------
# induced homotopy

def sweep_area(frames) -> float:
    """Area swept between consecutive frames, as a sum of quad-strip areas.

    Frames of different length (a vertex was dropped after reaching the
    chord of its neighbours) contribute nothing.
    """
    parts = []
    for F, G in zip(frames[:-1], frames[1:]):
        F = np.asarray(F, dtype=float)
        G = np.asarray(G, dtype=float)
        if F.shape != G.shape or len(F) < 2:
            continue
        a, b = F, np.roll(F, -1, axis=0)
        c, d = np.roll(G, -1, axis=0), G
        # shoelace of quad a-b-c-d per segment
        quad = 0.5 * ((a[:, 0] * b[:, 1] - b[:, 0] * a[:, 1])
                      + (b[:, 0] * c[:, 1] - c[:, 0] * b[:, 1])
                      + (c[:, 0] * d[:, 1] - d[:, 0] * c[:, 1])
                      + (d[:, 0] * a[:, 1] - a[:, 0] * d[:, 1]))
        parts.extend(np.abs(quad).tolist())
    return math.fsum(parts)


def _collapse_piece(poly: np.ndarray, witness: ImmersionWitness, steps: int):
    """Frames of one piece shrinking ear by ear onto its first vertex."""
    order = contraction_order(witness, base=0)
    areas = [abs(_tri_area(poly, t)) for t, _ in order]
    total = math.fsum(areas) or 1.0
    pos = poly.copy()
    remaining = list(range(len(poly)))
    out = [pos[remaining].copy()]
    for (tri, tip), area in zip(order, areas):
        r = len(remaining)
        k = remaining.index(tip)
        prev, nxt = remaining[(k - 1) % r], remaining[(k + 1) % r]
        if r == 2:
            target = pos[prev].copy()
        else:
            target = 0.5 * (pos[prev] + pos[nxt])
        src = pos[tip].copy()
        count = max(1, int(round(steps * area / total)))
        for s in range(1, count + 1):
            pos[tip] = src + (target - src) * (s / count)
            out.append(pos[remaining].copy())
        remaining.remove(tip)
        out.append(pos[remaining].copy())
        if len(remaining) == 2:
            # degenerate two-gon: pull the last free vertex onto the base
            other = remaining[1]
            pos[other] = pos[remaining[0]]
            out.append(pos[remaining].copy())
            break
    return out


def _tri_area(P, tri):
    a, b, c = (P[i] for i in tri)
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def induced_homotopy_frames(d: Decomposition, samples: int = 200) -> HomotopyFrames:
    """Contract pieces last-to-first, each onto its root, recording frames.

    The move log is combinatorial: while piece ``i`` is contracted, every
    non-smoothed crossing it still carries disappears (paired into bigon
    removals) and its root vanishes in a final monogon removal.
    """
    st = d.analysis.arcs
    k = len(d.pieces)
    W = [decomposition_area(Decomposition(d.analysis, [p])) for p in d.pieces]
    total = math.fsum(W) or 1.0
    piece_of = {}
    for i, p in enumerate(d.pieces):
        for a in p.arcs:
            piece_of[a] = i
    present = set(range(k))
    # crossing -> pieces passing straight through it
    carriers = {}
    for i, p in enumerate(d.pieces):
        for _, cid, kind in st.junctions(p.ref):
            if kind == "through" and cid != 0:
                carriers.setdefault(cid, set()).add(i)
    frames = []
    log = []
    phases = []
    gone = set()
    for i in range(k - 1, -1, -1):
        p = d.pieces[i]
        poly = st.polygon(p.ref, start_at_root=True)
        rep_poly = p.witness.polygon
        if len(rep_poly) != len(poly):
            raise InvalidDecomposition("witness polygon does not match piece")
        steps = max(1, int(round(samples * W[i] / total)))
        local = _collapse_piece(rep_poly, p.witness, steps)
        lo, hi = min(p.arcs), max(p.arcs)
        before = [a for a in range(lo) if piece_of[a] in present]
        after = [a for a in range(hi + 1, len(st.arcs)) if piece_of[a] in present]
        prefix = _arc_points(st, before)
        suffix = _arc_points(st, after)
        first = len(frames)
        for poly_k in local:
            parts = [x for x in (prefix, poly_k, suffix) if len(x)]
            frames.append(np.concatenate(parts, axis=0))
        last = len(frames) - 1
        phases.append((i, first, last))
        dying = sorted(c for c, owners in carriers.items()
                       if c not in gone and i in owners and max(owners) == i)
        mid = (first + last) // 2
        for a, b in zip(dying[0::2], dying[1::2]):
            log.append(MoveEvent("IIa", (a, b), mid))
        if len(dying) % 2:
            # an unpaired crossing would contradict the parity of the
            # winding structure; surface it rather than hide it
            log.append(MoveEvent("III", (dying[-1],), mid))
        gone.update(dying)
        log.append(MoveEvent("Ia", (p.root,), last))
        present.discard(i)
    base = np.asarray(d.analysis.curve.ordered[:1], dtype=float)
    frames.append(base)
    return HomotopyFrames(frames, log, phases)


def _arc_points(st, arc_ids) -> np.ndarray:
    pts = []
    for a in arc_ids:
        pts.extend(st.arcs[a].polyline[:-1])
    return np.asarray(pts, dtype=float).reshape(-1, 2)


# ----------------------------------------------------------------------------
# metric on based curves

def _as_open(curve: ClosedPolyCurve, offset=(0.0, 0.0)) -> OpenPolyline:
    P = curve.ordered + np.asarray(offset)
    return OpenPolyline(tuple(map(tuple, np.vstack([P, P[:1]]))))


def metric_check(c1: ClosedPolyCurve, c2: ClosedPolyCurve, tol: float = DEFAULT_TOL,
                 epsilon: float = 1e-7, seed: int = 0, cap: Optional[int] = None) -> float:
    """``sigma(c1 . c2^-1)``; c2 is translated onto c1's base point first."""
    shift = np.subtract(c1.base_point, c2.base_point)
    loop = concatenate_open(_as_open(c1), _as_open(c2, shift), join="shared-endpoints",
                            epsilon=epsilon, seed=seed, tol=tol)
    if loop is None:
        return 0.0
    return min_homotopy_area(loop, tol=tol, cap=cap).sigma
