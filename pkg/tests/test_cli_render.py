import io
import json

import pytest

from minhom import fixtures, homotopy, render
from minhom.arrangement import analyze
from minhom.cli import run


@pytest.fixture
def curve_file(tmp_path):
    def make(name):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(fixtures.get(name).to_document()))
        return str(p)
    return make


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_min_area_json_and_verify(curve_file, tmp_path):
    f = curve_file("fig2b")
    dec = tmp_path / "d.json"
    code, out, _ = call("min-area", f, "--json", "--no-timings", "--decomposition", str(dec))
    assert code == 0
    doc = json.loads(out)
    assert doc["sigma"] == pytest.approx(107.15)
    assert doc["anchor_set"] == [0, 3]
    assert "timings" not in doc["report"]
    code, out, _ = call("verify", f, "--decomposition", str(dec), "--json")
    assert code == 0 and json.loads(out)["matches"] is True


def test_decompose_all(curve_file):
    code, out, _ = call("decompose", curve_file("fig2b"), "--all", "--json")
    doc = json.loads(out)
    assert code == 0 and [s["anchors"] for s in doc["sets"]][0] == [0, 3]


def test_exit_codes(tmp_path, curve_file):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("analyze", str(bad))[0] == 2
    assert call("min-area", curve_file("fig2b"), "--cap-crossings", "2")[0] == 3
    nn = tmp_path / "nn.json"
    nn.write_text(json.dumps({"points": [[0, 0], [2, 0], [2, 2], [1, 0], [0, 2]]}))
    assert call("analyze", str(nn))[0] == 2
    code, _, err = call("analyze", str(nn), "--perturb", "1e-3")
    assert code == 0 and "perturbed" in err


def test_frames_jsonl(curve_file, tmp_path):
    fr = tmp_path / "f.jsonl"
    code, _, _ = call("min-area", curve_file("bowtie"), "--frames", str(fr), "--samples", "50")
    lines = [json.loads(x) for x in fr.read_text().splitlines()]
    assert code == 0
    assert lines[-1] == {"move": "Ia", "crossings": [0], "frame": lines[-1]["frame"]}


def test_graph_dist_cli(tmp_path):
    g1 = tmp_path / "g1.json"
    g2 = tmp_path / "g2.json"
    g1.write_text(json.dumps({"vertices": {"a": [0, 0], "b": [4, 0]}, "edges": [["a", "b"]]}))
    g2.write_text(json.dumps({"vertices": {"a": [0, 1], "b": [4, 1]}, "edges": [["a", "b"]]}))
    pairs = tmp_path / "p.csv"
    code, out, _ = call("graph-dist", str(g1), str(g2), "--pairs", str(pairs))
    assert code == 0 and float(out) == pytest.approx(4.0)
    assert pairs.read_text().splitlines()[0] == "u,v,sigma"


@pytest.mark.parametrize("name", ["bowtie", "fig2b"])
def test_svg_is_deterministic(name, tmp_path):
    a = analyze(fixtures.get(name))
    d = homotopy.min_homotopy_area(a).decomposition
    s1 = render.render_decomposition(d)
    s2 = render.render_decomposition(d, tmp_path / "x.svg")
    assert s1 == s2 and s1.lstrip().startswith("<?xml")
    assert "p0" in s1
    assert render.render_analysis(a) == render.render_analysis(a)
    fr = homotopy.induced_homotopy_frames(d, 40)
    assert "<svg" in render.render_frames(fr)


def test_cli_svg(curve_file, tmp_path):
    svg = tmp_path / "a.svg"
    code, _, _ = call("render", curve_file("fig2a"), "--what", "decomposition", "--svg", str(svg))
    assert code == 0 and svg.read_text().count("<svg") == 1
