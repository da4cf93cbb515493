"""SVG figures of arrangements, decompositions and homotopy frames.

Output is byte-for-byte reproducible: the SVG hash salt is fixed and the
date metadata is dropped.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Patch, Polygon  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "minhom"
plt.rcParams["svg.fonttype"] = "none"

PIECE_COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#17becf", "#9467bd",
                "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"]


def _figure():
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.set_aspect("equal")
    ax.axis("off")
    return fig, ax


def _finish(fig, path=None) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
    svg = buf.getvalue()
    if path is not None:
        with open(path, "w") as fh:
            fh.write(svg)
    return svg


def _draw_faces(ax, analysis, alpha=1.0):
    levels = sorted({abs(f.winding) for f in analysis.bounded})
    top = max(levels) if levels else 1
    cmap = plt.get_cmap("Blues")
    for f in analysis.bounded:
        k = abs(f.winding)
        if k == 0:
            continue
        pts = analysis.arrangement.cycle_points(f.id)
        ax.add_patch(Polygon(pts, closed=True, facecolor=cmap(0.25 + 0.6 * k / top),
                             edgecolor="none", alpha=alpha))
    handles = [Patch(facecolor=cmap(0.25 + 0.6 * k / top) if k else "white",
                     edgecolor="#999999", label=f"|winding| = {k}") for k in levels]
    return handles


def _draw_curve(ax, pts, color="black", lw=1.2, arrow=True):
    P = np.vstack([pts, pts[:1]])
    ax.plot(P[:, 0], P[:, 1], color=color, lw=lw)
    if arrow and len(pts) > 1:
        a, b = P[0], P[1]
        ax.annotate("", xy=0.5 * (a + b), xytext=a,
                    arrowprops=dict(arrowstyle="->", color=color, lw=lw))


def _label_crossings(ax, analysis):
    for c in analysis.crossings:
        ax.plot(*c.location, "o", ms=3, color="black")
        ax.annotate(str(c.id), c.location, textcoords="offset points", xytext=(4, 4), fontsize=8)
    base = analysis.curve.base_point
    ax.plot(base.x, base.y, "s", ms=5, color="black")
    ax.annotate("0", base, textcoords="offset points", xytext=(4, -10), fontsize=8)


def render_analysis(analysis, path=None) -> str:
    fig, ax = _figure()
    handles = _draw_faces(ax, analysis)
    _draw_curve(ax, analysis.curve.ordered)
    _label_crossings(ax, analysis)
    if handles:
        ax.legend(handles=handles, loc="upper left", bbox_to_anchor=(1.0, 1.0), fontsize=8)
    ax.autoscale_view()
    return _finish(fig, path)


def render_decomposition(d, path=None) -> str:
    analysis = d.analysis
    st = analysis.arcs
    fig, ax = _figure()
    _draw_faces(ax, analysis, alpha=0.35)
    handles = []
    for i, p in enumerate(d.pieces):
        color = PIECE_COLORS[i % len(PIECE_COLORS)]
        _draw_curve(ax, st.polygon(p.ref, start_at_root=True), color=color, lw=2.0)
        loc = st.location(p.root)
        ax.plot(loc[0], loc[1], "o", ms=7, color=color, markeredgecolor="black")
        ax.annotate(f"p{p.root}", loc, textcoords="offset points", xytext=(5, 5),
                    fontsize=9, color=color)
        sign = "+" if p.sign > 0 else "-"
        handles.append(Patch(facecolor=color, label=f"piece {i + 1}: root p{p.root}, sign {sign}"))
    ax.legend(handles=handles, loc="upper left", bbox_to_anchor=(1.0, 1.0), fontsize=8)
    ax.autoscale_view()
    return _finish(fig, path)


def render_frames(frames, path=None, count: int = 10) -> str:
    fig, ax = _figure()
    seq = frames.frames if hasattr(frames, "frames") else frames
    idx = np.unique(np.linspace(0, len(seq) - 1, min(count, len(seq))).round().astype(int))
    cmap = plt.get_cmap("viridis")
    for j, k in enumerate(idx):
        F = np.asarray(seq[k])
        color = cmap(j / max(1, len(idx) - 1))
        if len(F) == 1:
            ax.plot(F[0, 0], F[0, 1], "o", color=color)
        else:
            _draw_curve(ax, F, color=color, lw=1.0, arrow=False)
    ax.autoscale_view()
    return _finish(fig, path)
