import json

import numpy as np
import pytest

import oracles
from minhom import fixtures
from minhom.curve import (
    ClosedPolyCurve, OpenPolyline, build_arcs, cancel_spurs, concatenate_open, detect_crossings,
    is_normal, load_curve, load_document, perturb_to_normal, reverse_curve,
)
from minhom.errors import DegenerateInput, NormalityViolation, ParseError, PerturbationFailed


@pytest.mark.parametrize("seed", range(40))
def test_crossings_match_exact_intersections(seed):
    c = fixtures.random_curves(seed, 1, max_crossings=8)[0]
    got = detect_crossings(c)
    want = oracles.exact_crossings(c.ordered)
    assert len(got) == len(want)
    got_loc = sorted((round(x.location[0], 9), round(x.location[1], 9)) for x in got)
    want_loc = sorted((round(float(p[0]), 9), round(float(p[1]), 9)) for p, _, _ in want)
    assert got_loc == want_loc


def test_crossings_numbered_by_first_visit():
    c = fixtures.get("fig2b")
    xs = detect_crossings(c)
    firsts = [min(x.t1, x.t2) for x in xs]
    assert [x.id for x in xs] == list(range(1, len(xs) + 1))
    assert firsts == sorted(firsts)
    assert all(x.t1 < x.t2 for x in xs)


@pytest.mark.parametrize("seed", range(20))
def test_signed_area_is_exact_shoelace(seed):
    c = fixtures.random_curves(100 + seed, 1)[0]
    assert c.signed_area() == pytest.approx(float(oracles.shoelace(c.ordered)), abs=1e-12)


def test_vertex_touch_is_not_normal():
    c = ClosedPolyCurve(((0, 0), (2, 0), (2, 2), (1, 0), (0, 2)))
    assert not is_normal(c)
    with pytest.raises(NormalityViolation):
        detect_crossings(c)


def test_perturbation_repairs_and_stays_close():
    c = ClosedPolyCurve(((0, 0), (2, 0), (2, 2), (1, 0), (0, 2)))
    d = perturb_to_normal(c, 1e-3, seed=1)
    assert is_normal(d)
    assert np.abs(np.subtract(d.points, c.points)).max() <= 1e-3 + 1e-15
    assert any("perturbed" in n for n in d.notes)
    with pytest.raises(PerturbationFailed):
        perturb_to_normal(c, 0.0)


def test_overlapping_edges_are_rejected():
    c = ClosedPolyCurve(((0, 0), (4, 0), (4, 1), (1, 1), (1, 0), (3, 0), (3, -1), (0, -1)))
    with pytest.raises(NormalityViolation):
        detect_crossings(c)


@pytest.mark.parametrize("doc, err", [
    ({"points": [[0, 0], [1, 0]]}, DegenerateInput),
    ({"points": [[0, 0], [1, 0], [1, 0], [0, 1]]}, DegenerateInput),
    ({"points": [[0, 0], [1, "x"], [0, 1]]}, ParseError),
    ({"pts": []}, ParseError),
    ({"points": [[0, 0], [1, float("nan")], [0, 1]]}, DegenerateInput),
])
def test_bad_documents(doc, err):
    with pytest.raises(err):
        load_curve(doc)


def test_load_from_file_and_string(tmp_path):
    doc = fixtures.get("bowtie").to_document()
    p = tmp_path / "c.json"
    p.write_text(json.dumps(doc))
    assert load_curve(str(p)) == load_curve(json.dumps(doc)) == fixtures.get("bowtie")
    assert isinstance(load_document({"points": [[0, 0], [1, 1]], "closed": False}), OpenPolyline)


def test_base_on_another_edge_is_relocated():
    # vertex 3 sits on edge 0-1
    c = load_curve({"points": [[0, 0], [4, 0], [4, 4], [2, 0], [0, 4]], "base_index": 3},
                   tol=1e-9)
    assert c.base_index != 3
    assert any("relocated" in n for n in c.notes)


def test_arcs_cover_curve():
    c = fixtures.get("fig2b")
    st = build_arcs(c)
    assert len(st.arcs) == 2 * st.n + 1
    total = sum(np.hypot(*np.diff(np.asarray(a.polyline), axis=0).T).sum() for a in st.arcs)
    P = c.ordered
    length = np.hypot(*np.diff(np.vstack([P, P[:1]]), axis=0).T).sum()
    assert total == pytest.approx(length)


def test_reverse_keeps_base_point():
    c = fixtures.get("fig2a")
    r = reverse_curve(c)
    assert r.base_point == c.base_point
    assert r.signed_area() == pytest.approx(-c.signed_area())


def test_spur_cancellation():
    assert cancel_spurs([(0, 0), (2, 0), (1, 0)]) == []
    assert concatenate_open(OpenPolyline(((0, 0), (1, 1), (2, 0))),
                            OpenPolyline(((0, 0), (1, 1), (2, 0)))) is None
    loop = concatenate_open(OpenPolyline(((0, 0), (2, 0))), OpenPolyline(((0, 1), (2, 1))),
                            join="straight-line-join")
    assert abs(loop.signed_area()) == pytest.approx(2.0)
