import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddset.construct import build_odd_set
from oddset.errors import OddSetError, VertexLimitError
from oddset.geometry import PointSet, parity_audit, verify_odd_set
from oddset.search import (
    LatticeBox,
    bound_report,
    build_odd_graph,
    enumerate_box,
    lattice_cap,
    max_odd_clique,
    search_box,
    CliqueResult,
)
from oracles import naive_max_odd_subset


def line(*values):
    return [(F(v),) for v in values]


def test_enumerate_examples():
    assert enumerate_box(LatticeBox.cube(1, "half", 0, 2)) == line(0, F(1, 2), 1, F(3, 2), 2)
    assert len(enumerate_box(LatticeBox.cube(2, "int", 0, 1))) == 4
    assert enumerate_box(LatticeBox.cube(1, "int", 3, 3)) == line(3)


def test_enumerate_is_lexicographic_and_counts():
    box = LatticeBox(3, "half", (F(0), F(-1), F(1, 2)), (F(1), F(0), F(1, 2)))
    pts = enumerate_box(box)
    assert pts == sorted(pts)
    assert len(pts) == box.count() == 3 * 3 * 1
    assert all(box.contains(p) for p in pts)


def test_enumerate_limit(monkeypatch):
    box = LatticeBox.cube(2, "int", 0, 9)
    with pytest.raises(VertexLimitError, match="100"):
        enumerate_box(box, limit=99)
    monkeypatch.setenv("ODDSET_VERTEX_LIMIT", "50")
    with pytest.raises(VertexLimitError):
        enumerate_box(box)
    monkeypatch.setenv("ODDSET_VERTEX_LIMIT", "100")
    assert len(enumerate_box(box)) == 100


@pytest.mark.parametrize(
    "args",
    [
        (1, "int", (F(1, 2),), (F(2),)),
        (1, "half", (F(1, 3),), (F(2),)),
        (1, "int", (F(3),), (F(2),)),
        (1, "quarter", (F(0),), (F(1),)),
        (2, "int", (F(0),), (F(1),)),
    ],
)
def test_box_validation(args):
    with pytest.raises(OddSetError):
        LatticeBox(*args)


def test_odd_graph_examples():
    g = build_odd_graph(line(0, F(1, 2), 1, F(3, 2), 2))
    assert sorted(g.edges()) == [(0, 2), (1, 3), (2, 4)]
    assert g.edge_count == 3
    assert build_odd_graph(line(0, 2, 4)).edge_count == 0
    assert build_odd_graph(line(0, 1)).edges() == [(0, 1)]


@given(st.lists(st.tuples(st.fractions(-5, 5, max_denominator=4), st.fractions(-5, 5, max_denominator=4)), min_size=1, max_size=14, unique=True))
@settings(max_examples=50)
def test_odd_graph_matches_verify(pts):
    g = build_odd_graph(pts)
    for u, v in itertools.combinations(range(len(pts)), 2):
        assert g.adjacent(u, v) == g.adjacent(v, u) == verify_odd_set(PointSet.of([pts[u], pts[v]])).verdict
    assert not any(g.adjacent(u, u) for u in range(len(pts)))


def test_clique_examples():
    r = max_odd_clique(build_odd_graph(line(0, F(1, 2), 1, F(3, 2), 2)))
    assert r.max_size == 2
    assert search_box(LatticeBox.cube(2, "half", 0, 3)).max_size == 4
    assert search_box(LatticeBox.cube(2, "int", 0, 6)).max_size == 2


def test_empty_graph():
    r = max_odd_clique(build_odd_graph([]))
    assert r.max_size == 0 and len(r.witness) == 0


def test_edgeless_graph_gives_single_point():
    r = max_odd_clique(build_odd_graph(line(0, 2, 4)))
    assert r.max_size == 1 and len(r.witness) == 1


def test_constructed_set_fits_and_is_found():
    ps = build_odd_set(2)
    box = LatticeBox.cube(2, "half", 0, 3)
    assert all(box.contains(p) for p in ps)


SMALL_BOXES = [
    LatticeBox.cube(1, "half", 0, 3),
    LatticeBox.cube(1, "half", -2, 5),
    LatticeBox.cube(1, "int", 0, 6),
    LatticeBox.cube(2, "half", 0, 3),
    LatticeBox.cube(2, "int", 0, 6),
    LatticeBox.cube(2, "half", 0, 2),
    LatticeBox(2, "half", (F(0), F(0)), (F(4), F(3, 2))),
    LatticeBox(2, "int", (F(-3), F(0)), (F(3), F(4))),
    LatticeBox.cube(3, "half", 0, 1),
    LatticeBox(3, "half", (F(0), F(0), F(0)), (F(3, 2), F(3, 2), F(1))),
    LatticeBox.cube(3, "int", 0, 2),
]


@pytest.mark.parametrize("box", SMALL_BOXES, ids=lambda b: f"{b.lattice}{b.dimension}-{b.count()}")
def test_solver_matches_naive_oracle(box):
    assert box.count() <= 60
    pts = enumerate_box(box)
    cap = lattice_cap(box.dimension, box.lattice)
    result = search_box(box)
    assert result.max_size == naive_max_odd_subset(pts, cap)
    assert result.max_size <= cap
    assert len(result.witness) == result.max_size
    assert verify_odd_set(result.witness).verdict
    assert all(box.contains(p) for p in result.witness)
    assert parity_audit(result.witness).passes


@pytest.mark.parametrize("box", SMALL_BOXES[:8], ids=lambda b: f"{b.lattice}{b.dimension}-{b.count()}")
@pytest.mark.parametrize("threads", [2, 4])
def test_threaded_search_same_size(box, threads):
    serial = search_box(box)
    parallel = search_box(box, threads=threads)
    assert parallel.max_size == serial.max_size
    assert verify_odd_set(parallel.witness).verdict


def test_branch_order_does_not_change_size():
    pts = enumerate_box(LatticeBox.cube(2, "half", 0, 3))
    sizes = {max_odd_clique(build_odd_graph(pts[::-1])).max_size, max_odd_clique(build_odd_graph(pts)).max_size}
    assert sizes == {4}


@pytest.mark.parametrize("lattice, dim, top", [("half", 1, 4), ("half", 2, 3), ("int", 2, 5)])
def test_monotone_in_box_size(lattice, dim, top):
    sizes = [search_box(LatticeBox.cube(dim, lattice, 0, hi)).max_size for hi in range(0, top + 1)]
    assert sizes == sorted(sizes)


def test_three_dimensional_half_box_reaches_cap():
    box = LatticeBox.cube(3, "half", 0, 3)
    result = search_box(box)
    assert result.max_size == 8
    assert parity_audit(result.witness).passes


def test_bound_report_examples():
    assert not bound_report(2, 4, "half").violation
    assert bound_report(2, 4, "half").cap == 4
    assert not bound_report(1, 2, "int").violation
    rep = bound_report(3, 9, "half")
    assert rep.violation and rep.cap == 8
    assert "VIOLATION" in rep.summary() and "within box" in rep.summary()


def test_bound_report_accepts_result():
    result = CliqueResult(4, build_odd_set(2), 1, 0.0)
    assert bound_report(2, result, "half").to_json_obj() == {
        "max_size": 4,
        "cap": 4,
        "lattice": "half",
        "scope": "within box",
        "violation": False,
    }
