"""Hand-built test curves and a seeded random curve generator.

The worked-example curves are combinatorial reconstructions: coordinates are
chosen freely, only the crossing pattern, the face windings and the stated
area relations matter.
"""

from __future__ import annotations

import math
import numpy as np

from .curve import ClosedPolyCurve, detect_crossings
from .errors import MinhomError


def square(side: float = 1.0) -> ClosedPolyCurve:
    s = float(side)
    return ClosedPolyCurve(((0, 0), (s, 0), (s, s), (0, s)))


def bowtie(a: float = 1.0, b: float = 1.0) -> ClosedPolyCurve:
    """Figure-eight through the origin with triangular lobes.

    The left lobe (area ``b``) runs counter-clockwise, the right lobe (area
    ``a``) clockwise.
    """
    ra, rb = math.sqrt(a), math.sqrt(b)
    # both strands run along the diagonals y = x and y = -x
    return ClosedPolyCurve(((-rb, -rb), (ra, ra), (ra, -ra), (-rb, rb)))


def limacon_with_kink() -> ClosedPolyCurve:
    """Two-crossing self-overlapping curve: a limacon whose inner loop carries a
    clockwise kink.

    Faces: inner loop (winding 2), the annulus (winding 1) and the kink
    (winding 0).
    """
    return ClosedPolyCurve((
        (10, -1), (10, 10), (-1, 10), (-1, 4),
        (5, 4), (5, 3), (4.2, 3), (4.2, 4.5),     # kink below the inner loop's bottom edge
        (7, 4.5), (7, 8), (3, 8), (3, 1),
    ))


def _limacon_two_kinks_points(kink2_width: float) -> list:
    x = 7.0 + float(kink2_width)
    return [
        (10, -1), (10, 10), (-1, 10), (-1, 4),
        (5, 4), (5, 3), (4.2, 3), (4.2, 4.5),     # kink at crossing 2
        (7, 4.5), (7, 6.5), (x, 6.5), (x, 5.5), (6.5, 5.5),   # kink at crossing 3
        (6.5, 8), (3, 8), (3, 1),
    ]


def limacon_two_kinks(kink2_width: float = 0.6) -> ClosedPolyCurve:
    """Three-crossing curve with windings {2, 1, 0, 0} that is not self-overlapping.

    Crossing 1 is the limacon crossing; crossings 2 and 3 are the roots of two
    clockwise kinks on the inner loop.  The kink at crossing 2 has area 0.8,
    the one at crossing 3 has area ``kink2_width`` (default 0.6, smaller).
    """
    return ClosedPolyCurve(tuple(_limacon_two_kinks_points(kink2_width)))


def limacon() -> ClosedPolyCurve:
    """One crossing, inner loop inside the outer loop; Whitney index 2."""
    return ClosedPolyCurve((
        (10, -1), (10, 10), (-1, 10), (-1, 4),
        (7, 4), (7, 8), (3, 8), (3, 1),
    ))


def two_loops_sharing_point() -> ClosedPolyCurve:
    """Two counter-clockwise loops, one nested in the other, joined at one crossing.

    This is the limacon again: both lobes are positive, so it splits into two
    positive simple loops.
    """
    return limacon()


def bigon_pair():
    """A rectangle with a slot pushed through its bottom edge, and the same
    rectangle after the slot is pulled back.

    The slot crosses the bottom edge twice; the two crossings bound a bigon
    below the rectangle, so the pair differs by one bigon removal.
    """
    before = ClosedPolyCurve((
        (0, 0), (6, 0), (6, 4), (3.5, 4), (3.5, -1), (2.5, -1), (2.5, 4), (0, 4),
    ))
    after = ClosedPolyCurve((
        (0, 0), (6, 0), (6, 4), (3.5, 4), (3.5, 1), (2.5, 1), (2.5, 4), (0, 4),
    ))
    return before, after


def kink_pair():
    """A square with an outward clockwise kink, and the plain square."""
    before = ClosedPolyCurve((
        (0, 0), (3, 0), (3, -1), (2, -1), (2, 1), (4, 1), (4, 4), (0, 4),
    ))
    after = ClosedPolyCurve(((0, 0), (4, 0), (4, 4), (0, 4)))
    return before, after


def _gated_gadget(p, q, t: float, scale: float, kink2_width: float = 1.0) -> list:
    """Points replacing the segment ``p -> q`` by a detour through a small
    copy of :func:`limacon_two_kinks` drawn on the left of the segment.

    The detour crosses itself once where it enters the copy, so the copy is a
    sub-loop hanging off that crossing.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = (q - p) / np.hypot(*(q - p))
    n = np.array([-d[1], d[0]])
    o = p + t * (q - p)
    local = [(-2, -2)] + _limacon_two_kinks_points(kink2_width) + [(3, -3), (12, -3)]
    return [tuple(np.round(o + scale * (u * d + v * n), 4)) for u, v in local]


def fig7_class() -> ClosedPolyCurve:
    """Ten-crossing curve with 22 valid anchor sets.

    Three parts in a row, visited left to right:

    * a mirrored :func:`limacon_with_kink` (crossings 1, 2: split both or none),
    * an X-shaped crossing 3 that every decomposition must split,
    * a figure-eight whose negative lobe pokes a finger through the positive
      lobe (crossings 4, 9, 10: split exactly one), with a gated two-kink
      limacon hanging off crossing 5 inside the pocket between the lobes
      (crossings 6, 7, 8 behave like :func:`limacon_two_kinks`, and only
      when 5 is split; splitting 4 requires splitting 5).

    The cheapest decomposition splits 3, 4, 5 and the smaller kink 7.
    """
    left = [(-x, y) for x, y in limacon_with_kink().points]
    p, q = (58, 8), (38, 10)
    right = ([(30, -20), p] + _gated_gadget(p, q, 0.35, 0.35)
             + [q, (38, 14), (70, 20), (70, -20), (30, 20)])
    return ClosedPolyCurve(tuple(left + [(15, 10)] + right + [(15, -10)]))


def thick_path(center, width: float) -> ClosedPolyCurve:
    """Boundary of a strip of the given width around a polyline.

    When the centre line crosses itself the strip overlaps itself, but it is
    still an immersed disk, so its boundary is self-overlapping.
    """
    C = np.asarray(center, dtype=float)
    h = 0.5 * float(width)
    n = len(C)
    left, right = [], []
    for i in range(n):
        if i == 0:
            d = C[1] - C[0]
        elif i == n - 1:
            d = C[-1] - C[-2]
        else:
            d0 = C[i] - C[i - 1]
            d1 = C[i + 1] - C[i]
            d0 /= np.hypot(*d0)
            d1 /= np.hypot(*d1)
            d = d0 + d1
        d = d / np.hypot(*d)
        nrm = np.array([-d[1], d[0]])
        if 0 < i < n - 1:
            d0 = C[i] - C[i - 1]
            d0 /= np.hypot(*d0)
            cos_half = float(nrm @ np.array([-d0[1], d0[0]]))
            off = h / max(cos_half, 0.2)
        else:
            off = h
        left.append(C[i] + off * nrm)
        right.append(C[i] - off * nrm)
    pts = right + left[::-1]
    return ClosedPolyCurve(tuple(map(tuple, np.round(pts, 6))))


def milnor_class() -> ClosedPolyCurve:
    """Self-overlapping curve with two interior curls.

    Built as the boundary of a strip whose centre line curls over itself at
    both ends, so the immersed disk is the strip itself while the boundary has
    nested, overlapping loops in the spirit of Milnor's doodle.
    """
    t1 = np.linspace(0.0, 1.6 * math.pi, 12)
    left_curl = np.c_[-4 + 2.2 * np.cos(math.pi - t1), 2.2 * np.sin(math.pi - t1)]
    mid = np.array([[-1.5, -0.3], [1.5, 0.3]])
    t2 = np.linspace(0.0, 1.6 * math.pi, 12)
    right_curl = np.c_[4 + 2.2 * np.cos(t2 + math.pi), 2.2 * np.sin(t2 + math.pi)]
    center = np.vstack([left_curl[::-1], mid, right_curl])
    return thick_path(center, 0.8)


def random_curve(rng: np.random.Generator, max_crossings: int = 6,
                 min_crossings: int = 0, vertices=(4, 8), span: float = 10.0,
                 max_tries: int = 1000) -> ClosedPolyCurve:
    """Random normal polygon with a crossing count in the requested range.

    Vertices are drawn uniformly in a square and rounded to one decimal so
    the fixtures are easy to print; non-normal draws are rejected.
    """
    lo, hi = vertices
    for _ in range(max_tries):
        k = int(rng.integers(lo, hi + 1))
        pts = rng.uniform(0.0, span, size=(k, 2)).round(1)
        try:
            c = ClosedPolyCurve(tuple(map(tuple, pts)))
            n = len(detect_crossings(c))
        except MinhomError:
            continue
        if min_crossings <= n <= max_crossings:
            return c
    raise RuntimeError("could not draw a random curve with the requested crossing count")


def random_curves(seed: int, count: int, max_crossings: int = 6, **kw) -> list:
    rng = np.random.default_rng(seed)
    return [random_curve(rng, max_crossings=max_crossings, **kw) for _ in range(count)]


FIXTURES = {
    "square": square,
    "bowtie": bowtie,
    "limacon": limacon,
    "fig2a": limacon_with_kink,
    "fig2b": limacon_two_kinks,
    "milnor": milnor_class,
    "fig7": fig7_class,
}


def get(name: str) -> ClosedPolyCurve:
    return FIXTURES[name]()
