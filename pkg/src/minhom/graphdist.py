"""Homotopy-area distance between two weighted plane graphs.

For every ordered pair ``(u, v)`` of distinct vertices of the first graph,
shortest ``u -> v`` paths are compared with shortest paths between the
nearest vertices ("associates") of the second graph.  Each pair of paths is
closed into a loop by straight segments between their endpoints, and the
smallest minimum homotopy area over all choices is the pair's distance.  The
graph distance is the mean over ordered pairs.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx
import numpy as np

from .curve import DEFAULT_TOL, OpenPolyline, concatenate_open
from .errors import DegenerateInput, Disconnected, ParseError
from .homotopy import min_homotopy_area

DEFAULT_PATH_CAP = 64


@dataclass
class PlaneGraph:
    vertices: dict                # id -> (x, y)
    edges: list                   # (u, v, weight)
    graph: nx.Graph = field(init=False, repr=False)

    def __post_init__(self):
        verts = {}
        for k, p in self.vertices.items():
            x, y = float(p[0]), float(p[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise DegenerateInput(f"vertex {k!r} has a non-finite coordinate")
            verts[str(k)] = (x, y)
        self.vertices = verts
        g = nx.Graph()
        g.add_nodes_from(verts)
        edges = []
        for e in self.edges:
            u, v = str(e[0]), str(e[1])
            if u not in verts or v not in verts:
                raise DegenerateInput(f"edge ({u}, {v}) uses an unknown vertex")
            w = float(e[2]) if len(e) > 2 else math.dist(verts[u], verts[v])
            if not (w > 0 and math.isfinite(w)):
                raise DegenerateInput(f"edge ({u}, {v}) needs a positive weight")
            edges.append((u, v, w))
            g.add_edge(u, v, weight=w)
        self.edges = edges
        if len(verts) and not nx.is_connected(g):
            raise Disconnected("graph is not connected")
        self.graph = g

    def point(self, v) -> tuple:
        return self.vertices[v]

    def polyline(self, path) -> list:
        return [self.vertices[v] for v in path]


def load_graph(source) -> PlaneGraph:
    try:
        if isinstance(source, dict):
            doc = source
        else:
            with open(source) as fh:
                doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from exc
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise ParseError("graph document needs 'vertices' and 'edges'")
    return PlaneGraph(dict(doc["vertices"]), list(doc["edges"]))


def associates(point, g2: PlaneGraph, rel_tol: float = 1e-12) -> list:
    """Vertices of ``g2`` nearest to ``point``; all of them on ties."""
    p = np.asarray(point, dtype=float)
    ids = sorted(g2.vertices)
    d = np.array([math.dist(p, g2.vertices[k]) for k in ids])
    best = d.min()
    return [k for k, dk in zip(ids, d) if dk <= best + rel_tol * max(1.0, best)]


@dataclass
class PathSet:
    paths: list
    truncated: bool


def shortest_paths(g: PlaneGraph, u, v, cap: int = DEFAULT_PATH_CAP) -> PathSet:
    """All minimum-weight ``u -> v`` paths in lexicographic order, at most ``cap``."""
    u, v = str(u), str(v)
    if u == v:
        return PathSet([[u]], False)
    pred, dist = nx.dijkstra_predecessor_and_distance(g.graph, u, weight="weight")
    if v not in dist:
        raise Disconnected(f"no path from {u} to {v}")
    # forward DAG of shortest-path edges restricted to vertices that lead to v
    succ = {}
    stack = [v]
    seen = {v}
    while stack:
        x = stack.pop()
        for p in pred[x]:
            succ.setdefault(p, []).append(x)
            if p not in seen:
                seen.add(p)
                stack.append(p)
    for k in succ:
        succ[k].sort()
    out = []
    truncated = False

    def walk(path):
        nonlocal truncated
        if len(out) >= cap:
            truncated = True
            return
        x = path[-1]
        if x == v:
            out.append(list(path))
            return
        for y in succ.get(x, ()):
            path.append(y)
            walk(path)
            path.pop()
            if truncated:
                return

    walk([u])
    return PathSet(out, truncated)


@dataclass
class PairDistance:
    u: str
    v: str
    sigma_uv: float
    witness: tuple                # (path in g1, path in g2)
    truncated: bool = False


def path_sigma(alpha, beta, tol: float = DEFAULT_TOL, epsilon: float = 1e-7,
               seed: int = 0, cap: Optional[int] = None) -> float:
    """Minimum homotopy area of the loop along ``alpha`` and back along ``beta``."""
    if len(beta) == 1:
        beta = [beta[0], beta[0]]
    if len(alpha) == 1:
        alpha = [alpha[0], alpha[0]]
    loop = concatenate_open(OpenPolyline(tuple(alpha)), OpenPolyline(tuple(beta)),
                            join="straight-line-join", epsilon=epsilon, seed=seed, tol=tol)
    if loop is None:
        return 0.0
    return min_homotopy_area(loop, tol=tol, cap=cap).sigma


def sigma_uv(g1: PlaneGraph, g2: PlaneGraph, u, v, cap_paths: int = DEFAULT_PATH_CAP,
             tol: float = DEFAULT_TOL, seed: int = 0, cap: Optional[int] = None) -> PairDistance:
    u, v = str(u), str(v)
    alphas = shortest_paths(g1, u, v, cap_paths)
    best = None
    truncated = alphas.truncated
    for uu in associates(g1.point(u), g2):
        for vv in associates(g1.point(v), g2):
            betas = shortest_paths(g2, uu, vv, cap_paths)
            truncated = truncated or betas.truncated
            for a in alphas.paths:
                for b in betas.paths:
                    s = path_sigma(g1.polyline(a), g2.polyline(b), tol=tol, seed=seed, cap=cap)
                    if best is None or s < best[0]:
                        best = (s, (tuple(a), tuple(b)))
    return PairDistance(u, v, best[0], best[1], truncated)


@dataclass
class GraphDistance:
    value: float
    table: list                   # PairDistance per ordered pair

    @property
    def truncated(self) -> bool:
        return any(p.truncated for p in self.table)


def graph_distance(g1: PlaneGraph, g2: PlaneGraph, cap_paths: int = DEFAULT_PATH_CAP,
                   tol: float = DEFAULT_TOL, seed: int = 0, cap: Optional[int] = None) -> GraphDistance:
    ids = sorted(g1.vertices)
    n = len(ids)
    if n < 2:
        raise DegenerateInput("the first graph needs at least two vertices")
    table = [sigma_uv(g1, g2, u, v, cap_paths, tol, seed, cap)
             for u in ids for v in ids if u != v]
    value = math.fsum(p.sigma_uv for p in table) / (n * (n - 1))
    return GraphDistance(value, table)


def write_pairs_csv(table, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["u", "v", "sigma"])
        for p in table:
            w.writerow([p.u, p.v, repr(float(p.sigma_uv))])


def read_pairs_csv(path) -> list:
    with open(path, newline="") as fh:
        return [(r["u"], r["v"], float(r["sigma"])) for r in csv.DictReader(fh)]
