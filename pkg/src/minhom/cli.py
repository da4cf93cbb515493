"""``minhom`` command line front end.

Exit status: 0 on success, 2 for bad input, 3 when a configured cap is hit,
1 for anything else the library raises.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import graphdist, homotopy, moves, render
from .arrangement import analyze
from .curve import DEFAULT_TOL, load_curve, perturb_to_normal
from .errors import CapExceeded, MinhomError, NormalityViolation
from .selfoverlap import check_witness, interior_area, is_self_overlapping


@dataclass
class RunReport:
    command: str
    input_digest: str = ""
    timings: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @contextmanager
    def stage(self, name):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round(time.perf_counter() - t0, 6)

    def to_document(self, with_timings: bool = True) -> dict:
        doc = {"command": self.command, "input_digest": self.input_digest,
               "outputs": self.outputs, "warnings": self.warnings}
        if with_timings:
            doc["timings"] = self.timings
        return doc


def _digest(paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        if p == "-":
            continue
        with open(p, "rb") as fh:
            h.update(fh.read())
    return h.hexdigest()[:16]


def _load(args, report: RunReport):
    curve = load_curve(args.curve, tol=args.tol)
    try:
        analysis = analyze(curve, args.tol)
    except NormalityViolation:
        if not args.perturb:
            raise
        curve = perturb_to_normal(curve, args.perturb, seed=args.seed, tol=args.tol)
        analysis = analyze(curve, args.tol)
    report.warnings.extend(curve.notes)
    return curve, analysis


def _faces_doc(analysis):
    return [{"id": f.id, "area": f.area, "winding": f.winding}
            for f in analysis.faces if not f.is_outer]


# ----------------------------------------------------------------------------
# subcommands

def cmd_analyze(args, report):
    with report.stage("analyze"):
        curve, a = _load(args, report)
    doc = {
        "crossings": [{"id": c.id, "location": list(c.location), "sign": c.sign,
                       "t1": c.t1, "t2": c.t2} for c in a.crossings],
        "faces": _faces_doc(a),
        "whitney": a.whitney,
        "winding_area": a.winding_area,
    }
    if args.svg:
        render.render_analysis(a, args.svg)
        report.outputs.append(args.svg)
    return doc, f"crossings {len(a.crossings)}  whitney {a.whitney}  winding area {a.winding_area:.12g}"


def cmd_selfoverlap(args, report):
    with report.stage("analyze"):
        curve, a = _load(args, report)
    with report.stage("selfoverlap"):
        rep = is_self_overlapping(curve, args.tol, windings=[f.winding for f in a.bounded])
    doc = {"self_overlapping": rep.is_self_overlapping, "whitney": rep.whitney}
    if rep.is_self_overlapping:
        check_witness(rep.witness, a)
        doc["sign"] = rep.witness.sign
        doc["interior_area"] = interior_area(rep.witness)
        if args.witness:
            with open(args.witness, "w") as fh:
                json.dump(rep.witness.to_document(), fh, indent=1)
            report.outputs.append(args.witness)
    text = "self-overlapping" if rep.is_self_overlapping else "not self-overlapping"
    return doc, f"{text} (whitney {rep.whitney})"


def cmd_min_area(args, report):
    with report.stage("analyze"):
        curve, a = _load(args, report)
    with report.stage("sigma"):
        res = homotopy.min_homotopy_area(a, tol=args.tol, cap=args.cap_crossings)
    doc = res.to_document()
    doc["face_sweep"] = {str(k): v for k, v in
                         homotopy.face_sweep_profile(res.decomposition).multiplicity.items()}
    if args.decomposition:
        with open(args.decomposition, "w") as fh:
            json.dump(res.decomposition.to_document(), fh, indent=1)
        report.outputs.append(args.decomposition)
    if args.frames:
        with report.stage("frames"):
            fr = homotopy.induced_homotopy_frames(res.decomposition, args.samples)
        with open(args.frames, "w") as fh:
            for k, F in enumerate(fr.frames):
                fh.write(json.dumps({"frame": k, "points": np.asarray(F).tolist()}) + "\n")
            for ev in fr.move_log:
                fh.write(json.dumps(ev.to_document()) + "\n")
        doc["frames"] = {"count": len(fr.frames), "swept_area": fr.swept_area()}
        report.outputs.append(args.frames)
    if args.svg:
        render.render_decomposition(res.decomposition, args.svg)
        report.outputs.append(args.svg)
    anchors = "{" + ",".join(map(str, sorted(res.anchor_set))) + "}"
    return doc, f"sigma {res.sigma:.12g}  winding area {res.winding_area:.12g}  anchors {anchors}"


def cmd_decompose(args, report):
    with report.stage("analyze"):
        curve, a = _load(args, report)
    if not args.all:
        res = homotopy.min_homotopy_area(a, tol=args.tol, cap=args.cap_crossings)
        return res.decomposition.to_document(), json.dumps(res.decomposition.to_document())
    with report.stage("enumerate"):
        rows = homotopy.enumerate_valid_anchor_sets(a, cap=args.cap_enumerate, tol=args.tol)
    doc = {"count": len(rows),
           "sets": [{"anchors": sorted(s), "area": area, "pieces": len(d.pieces),
                     "sense": homotopy.sense_class(d)} for s, d, area in rows]}
    lines = [f"{len(rows)} valid anchor sets"]
    for k, (s, d, area) in enumerate(rows, 1):
        lines.append(f"A{k:<3d} {{{','.join(map(str, sorted(s)))}}}  area {area:.12g}")
    if args.svg and rows:
        render.render_decomposition(rows[0][1], args.svg)
        report.outputs.append(args.svg)
    return doc, "\n".join(lines)


def cmd_gauss(args, report):
    curve, a = _load(args, report)
    code = moves.from_curve(curve, a.crossings)
    return code.to_document(), " ".join(map(str, code.labels))


def cmd_graph_dist(args, report):
    g1 = graphdist.load_graph(args.g1)
    g2 = graphdist.load_graph(args.g2)
    with report.stage("graph_distance"):
        res = graphdist.graph_distance(g1, g2, cap_paths=args.cap_paths, tol=args.tol,
                                       seed=args.seed, cap=args.cap_crossings)
    if res.truncated:
        report.warnings.append(f"shortest-path enumeration truncated at {args.cap_paths} paths")
    if args.pairs:
        graphdist.write_pairs_csv(res.table, args.pairs)
        report.outputs.append(args.pairs)
    doc = {"distance": res.value,
           "pairs": [{"u": p.u, "v": p.v, "sigma": p.sigma_uv} for p in res.table]}
    return doc, repr(res.value)


def cmd_render(args, report):
    if not args.svg:
        raise MinhomError("render needs --svg PATH")
    curve, a = _load(args, report)
    if args.what == "analysis":
        render.render_analysis(a, args.svg)
    else:
        res = homotopy.min_homotopy_area(a, tol=args.tol, cap=args.cap_crossings)
        if args.what == "decomposition":
            render.render_decomposition(res.decomposition, args.svg)
        else:
            render.render_frames(homotopy.induced_homotopy_frames(res.decomposition, args.samples),
                                 args.svg)
    report.outputs.append(args.svg)
    return {"svg": args.svg}, f"wrote {args.svg}"


def cmd_verify(args, report):
    curve, a = _load(args, report)
    with open(args.decomposition) as fh:
        doc = json.load(fh)
    solver = homotopy.CurveSolver(a, tol=args.tol, cap=args.cap_crossings)
    d = homotopy.build_decomposition(solver, [p["arcs"] for p in doc["pieces"]])
    area = homotopy.checked_decomposition_area(d)
    out = {"valid": True, "area": area, "anchor_set": sorted(d.anchor_set)}
    if "area" in doc:
        out["matches"] = abs(area - doc["area"]) <= 1e-9 * max(1.0, abs(area))
    return out, f"valid decomposition, area {area:.12g}"


# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report on stdout")
    common.add_argument("--svg", metavar="PATH", help="write an SVG figure")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--no-timings", action="store_true")
    common.add_argument("--cap-crossings", type=int, default=None,
                        help="recursion cap (default: $MINHOM_CAP_CROSSINGS or 14)")
    common.add_argument("--perturb", type=float, default=0.0, metavar="EPS",
                        help="repair a non-normal input by moving vertices at most EPS")

    p = argparse.ArgumentParser(prog="minhom", description="Minimum homotopy area of plane curves.")
    sub = p.add_subparsers(dest="command", required=True)

    def curve_cmd(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("curve", help="curve JSON file, or - for stdin")
        sp.set_defaults(func=func)
        return sp

    curve_cmd("analyze", cmd_analyze, "crossings, faces, winding numbers")
    sp = curve_cmd("selfoverlap", cmd_selfoverlap, "decide whether the curve bounds an immersed disk")
    sp.add_argument("--witness", metavar="PATH")
    sp = curve_cmd("min-area", cmd_min_area, "minimum homotopy area and its decomposition")
    sp.add_argument("--decomposition", metavar="PATH")
    sp.add_argument("--frames", metavar="PATH")
    sp.add_argument("--samples", type=int, default=200)
    sp = curve_cmd("decompose", cmd_decompose, "optimal or all valid decompositions")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--cap-enumerate", type=int, default=homotopy.DEFAULT_ENUMERATE_BOUND)
    curve_cmd("gauss", cmd_gauss, "signed Gauss code")
    sp = curve_cmd("render", cmd_render, "draw the arrangement, decomposition or frames")
    sp.add_argument("--what", choices=["analysis", "decomposition", "frames"], default="analysis")
    sp.add_argument("--samples", type=int, default=200)
    sp = curve_cmd("verify", cmd_verify, "re-check a decomposition JSON against its curve")
    sp.add_argument("--decomposition", metavar="PATH", required=True)
    sp = sub.add_parser("graph-dist", parents=[common], help="homotopy-area distance of two plane graphs")
    sp.add_argument("g1")
    sp.add_argument("g2")
    sp.add_argument("--pairs", metavar="PATH")
    sp.add_argument("--cap-paths", type=int, default=graphdist.DEFAULT_PATH_CAP)
    sp.set_defaults(func=cmd_graph_dist)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    report = RunReport(args.command)
    inputs = [getattr(args, k) for k in ("curve", "g1", "g2") if getattr(args, k, None)]
    try:
        report.input_digest = _digest(inputs)
        doc, text = args.func(args, report)
    except MinhomError as exc:
        if isinstance(exc, CapExceeded):
            report.warnings.append(f"cap exceeded: {exc}")
        err = {"error": type(exc).__name__, "message": str(exc)}
        if args.json:
            err["report"] = report.to_document(not args.no_timings)
            stdout.write(json.dumps(err, indent=1, sort_keys=True) + "\n")
        stderr.write(f"minhom: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        stderr.write(f"minhom: {exc}\n")
        return 2
    if args.json:
        doc = dict(doc)
        doc["report"] = report.to_document(not args.no_timings)
        stdout.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    else:
        stdout.write(text + "\n")
        for w in report.warnings:
            stderr.write(f"warning: {w}\n")
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
