import json
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddset.construct import build_odd_set
from oddset.errors import NotHalfIntegerError, OddSetError
from oddset.geometry import PointSet, l1_distance, parity_audit, phi_fingerprint, verify_odd_set
from oracles import l1

GOLDEN_2 = [(F(3, 2), F(1, 2)), (F(1), F(1)), (F(3), F(2)), (F(5, 2), F(5, 2))]

coord = st.fractions(min_value=-20, max_value=20, max_denominator=12)
int_coord = st.integers(min_value=-1000, max_value=1000).map(F)
half_coord = st.integers(min_value=-40, max_value=40).map(lambda k: F(k, 2))


def points(dim, elements=coord):
    return st.lists(elements, min_size=dim, max_size=dim).map(tuple)


def test_l1_examples():
    assert l1_distance((F(0),), (F(1),)) == 1
    assert l1_distance((F(3, 2), F(1, 2)), (F(1), F(1))) == 1
    p = (F(5, 3), F(-2))
    assert l1_distance(p, p) == 0


def test_l1_dimension_mismatch():
    with pytest.raises(OddSetError):
        l1_distance((F(0),), (F(0), F(1)))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(points(n), points(n), points(n), points(n))))
def test_metric_axioms_and_translation(pts):
    p, q, r, t = pts
    d = l1_distance(p, q)
    assert d == l1_distance(q, p) >= 0
    assert (d == 0) == (p == q)
    assert l1_distance(p, r) <= d + l1_distance(q, r)
    shift = lambda x: tuple(a + b for a, b in zip(x, t))  # noqa: E731
    assert l1_distance(shift(p), shift(q)) == d


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(*(points(n, int_coord) for _ in range(3)))))
def test_integer_triangle_parity(triple):
    a, b, c = triple
    assert (l1_distance(a, b) + l1_distance(b, c) - l1_distance(a, c)) % 2 == 0


def test_point_set_rejects_duplicates_and_bad_dimension():
    with pytest.raises(OddSetError, match="coincide"):
        PointSet.of([(0, 1), (0, 1)])
    with pytest.raises(OddSetError):
        PointSet(2, ((F(0), F(1)), (F(1),)))
    with pytest.raises(OddSetError):
        PointSet(0, ())


def test_verify_examples():
    cert = verify_odd_set(PointSet.of([(0,), (1,)]))
    assert cert.verdict and cert.distances() == [1]

    cert = verify_odd_set(PointSet.of([(0,), (1,), (2,)]))
    assert not cert.verdict
    assert cert.first_failure() == (0, 2, F(2), False)

    cert = verify_odd_set(PointSet.of(GOLDEN_2))
    assert cert.verdict
    assert cert.distances() == [1, 3, 3, 3, 3, 1]


def test_verify_vacuous():
    assert verify_odd_set(PointSet(3, ())).verdict
    assert verify_odd_set(PointSet.of([(F(1, 3), F(2))])).verdict


def test_certificate_covers_every_pair_in_order():
    ps = build_odd_set(4)
    cert = verify_odd_set(ps)
    pairs = [(i, j) for i, j, _, _ in cert.pair_results]
    assert pairs == list(combinations(range(len(ps)), 2))
    assert cert.verdict == all(ok for *_, ok in cert.pair_results)


@given(st.lists(points(3), min_size=2, max_size=12, unique=True))
@settings(max_examples=60)
def test_verify_matches_fraction_oracle(pts):
    cert = verify_odd_set(PointSet.of(pts))
    for i, j, d, ok in cert.pair_results:
        assert d == l1(pts[i], pts[j])
        assert ok == (d.denominator == 1 and d.numerator % 2 == 1)


def test_verify_big_integer_fallback():
    big = 2**70
    ps = PointSet.of([(F(big), F(1, 3)), (F(big + 1), F(1, 3)), (F(0), F(-1, 3))])
    cert = verify_odd_set(ps)
    assert cert.distances() == [1, big + F(2, 3), big + 1 + F(2, 3)]
    assert not cert.verdict


@pytest.mark.parametrize("workers", [2, 3, 7])
def test_partitioned_verification_identical(workers):
    ps = build_odd_set(6).translated([F(1, 3)] * 6)
    serial = verify_odd_set(ps).to_json_obj()
    assert verify_odd_set(ps, workers=workers).to_json_obj() == serial


@given(st.integers(-25, 25).filter(lambda c: c % 2))
@settings(max_examples=50)
def test_odd_scaling_keeps_odd_distances(c):
    ps = build_odd_set(3)
    assert verify_odd_set(ps.scaled(c)).verdict


def test_even_scaling_breaks_oddness():
    assert not verify_odd_set(build_odd_set(2).scaled(2)).verdict


@pytest.mark.parametrize(
    "p, bits",
    [((F(3, 2), F(1, 2)), (1, 1)), ((F(1), F(1)), (0, 0)), ((F(5, 2), F(2)), (1, 0))],
)
def test_phi(p, bits):
    assert phi_fingerprint(p) == bits


def test_phi_rejects_quarters():
    with pytest.raises(NotHalfIntegerError):
        phi_fingerprint((F(1, 4),))


def test_parity_audit_examples():
    audit = parity_audit(PointSet.of(GOLDEN_2))
    assert audit.fiber_sizes == {(1, 1): 2, (0, 0): 2}
    assert audit.weight_parities == ["even"] * 4
    assert audit.passes

    audit = parity_audit(PointSet.of([(0,), (F(1, 2),), (1,)]))
    assert audit.weight_parities == ["even", "odd", "even"]
    assert audit.fibers_at_most_two
    assert not audit.weight_parity_uniform

    assert parity_audit(PointSet.of([(F(7, 2), F(1))])).passes

    with pytest.raises(NotHalfIntegerError, match="point 2"):
        parity_audit(PointSet.of([(0,), (F(1, 3),)]))


def test_parity_audit_flags_crowded_fiber():
    audit = parity_audit(PointSet.of([(0,), (1,), (2,)]))
    assert audit.fiber_sizes == {(0,): 3}
    assert not audit.fibers_at_most_two


def test_json_round_trip():
    ps = build_odd_set(3).translated([F(1, 3), F(-7, 5), F(0)])
    text = ps.to_json()
    assert PointSet.from_json(text) == ps
    assert json.loads(text)["points"][0] == [str(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}" for c in ps[0]]


@given(st.integers(1, 3).flatmap(lambda n: st.lists(points(n), min_size=1, max_size=6, unique=True)))
def test_json_idempotent(pts):
    ps = PointSet.of(pts)
    assert PointSet.from_json(ps.to_json()) == ps


@pytest.mark.parametrize(
    "obj",
    [
        {"dim": 2, "points": [["0", "1"], ["1"]]},
        {"dim": 1, "points": [["0"], ["0"]]},
        {"dim": 1, "points": [["0.5"]]},
        {"points": []},
    ],
)
def test_json_reader_rejects(obj):
    with pytest.raises(OddSetError):
        PointSet.from_json_obj(obj)
