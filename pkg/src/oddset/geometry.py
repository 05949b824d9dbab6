"""Points, exact l1 distances, odd-distance certificates and the parity audit.

Bulk distance work runs on integer arrays: every coordinate is multiplied by
the common denominator of the whole set, so an l1 distance becomes an integer
numerator ``S`` over that denominator ``L`` and "odd integer" reduces to
``S mod 2L == L``.  When the scaled values could overflow int64 the same
computation runs on Python integers instead.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from oddset.errors import NotHalfIntegerError, OddSetError
from oddset.exact_arith import as_rational, format_rational, parse_rational

Point = tuple  # tuple[Fraction, ...]

# headroom for sums of n absolute differences without int64 overflow
_INT64_SAFE = 1 << 60


def make_point(coords: Sequence) -> Point:
    point = tuple(as_rational(c) for c in coords)
    if not point:
        raise OddSetError("a point needs at least one coordinate")
    return point


@dataclass(frozen=True)
class PointSet:
    """An ordered list of pairwise distinct points of a fixed dimension."""

    dimension: int
    points: tuple

    def __post_init__(self):
        if self.dimension < 1:
            raise OddSetError(f"dimension must be positive, got {self.dimension}")
        pts = tuple(make_point(p) for p in self.points)
        seen = {}
        for k, p in enumerate(pts):
            if len(p) != self.dimension:
                raise OddSetError(
                    f"point {k + 1} has {len(p)} coordinates, expected {self.dimension}"
                )
            if p in seen:
                raise OddSetError(f"points {seen[p] + 1} and {k + 1} coincide: {format_point(p)}")
            seen[p] = k
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, points: Sequence[Sequence]) -> "PointSet":
        pts = [make_point(p) for p in points]
        if not pts:
            raise OddSetError("cannot infer the dimension of an empty point list")
        return cls(len(pts[0]), tuple(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __getitem__(self, k: int) -> Point:
        return self.points[k]

    def coordinates(self) -> Iterator[Fraction]:
        for p in self.points:
            yield from p

    def scaled(self, factor) -> "PointSet":
        factor = as_rational(factor)
        if factor == 0:
            raise OddSetError("scaling by zero collapses the set")
        return PointSet(self.dimension, tuple(tuple(c * factor for c in p) for p in self.points))

    def translated(self, vector: Sequence) -> "PointSet":
        vector = make_point(vector)
        if len(vector) != self.dimension:
            raise OddSetError("translation vector has the wrong dimension")
        return PointSet(
            self.dimension, tuple(tuple(c + t for c, t in zip(p, vector)) for p in self.points)
        )

    def to_json_obj(self) -> dict:
        return {
            "dim": self.dimension,
            "points": [[format_rational(c) for c in p] for p in self.points],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PointSet":
        try:
            dim = obj["dim"]
            raw = obj["points"]
        except (KeyError, TypeError):
            raise OddSetError('point-set JSON needs "dim" and "points"') from None
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise OddSetError('"dim" must be an integer')
        points = []
        for k, row in enumerate(raw):
            if not isinstance(row, list) or len(row) != dim:
                raise OddSetError(f"point {k + 1} does not have {dim} coordinates")
            try:
                points.append(tuple(parse_rational(str(c)) for c in row))
            except ValueError as exc:
                raise OddSetError(f"point {k + 1}: {exc}") from None
        return cls(dim, tuple(points))

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise OddSetError(f"invalid JSON: {exc}") from None
        return cls.from_json_obj(obj)


def format_point(p: Point) -> str:
    return "(" + ", ".join(format_rational(c) for c in p) + ")"


def l1_distance(p: Sequence, q: Sequence) -> Fraction:
    if len(p) != len(q):
        raise OddSetError(f"dimension mismatch: {len(p)} vs {len(q)}")
    return sum((abs(a - b) for a, b in zip(p, q)), Fraction(0))


def common_denominator(values) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
    return den


def scaled_integer_coords(points: Sequence[Point], den: int | None = None):
    """Return ``(X, den)`` with ``X[k][i] = points[k][i] * den`` as integers.

    ``X`` is an int64 array when every l1 sum fits, otherwise a list of lists
    of Python ints.
    """
    if den is None:
        den = common_denominator(c for p in points for c in p)
    rows = [[c.numerator * (den // c.denominator) for c in p] for p in points]
    dim = len(rows[0]) if rows else 1
    peak = max((abs(v) for row in rows for v in row), default=0)
    if 2 * peak * dim < _INT64_SAFE and 2 * den < _INT64_SAFE:
        return np.array(rows, dtype=np.int64).reshape(len(rows), dim), den
    return rows, den


class PairResults(Sequence):
    """Read-only view of ``(i, j, distance, is_odd_integer)`` rows, ``i < j``.

    Rows are held as parallel arrays so certificates for thousands of points
    stay compact; tuples are materialized on access.
    """

    def __init__(self, left, right, scaled, odd, den: int):
        self._left = left
        self._right = right
        self._scaled = scaled
        self._odd = odd
        self._den = den

    def __len__(self) -> int:
        return len(self._left)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[t] for t in range(*k.indices(len(self)))]
        return (
            int(self._left[k]),
            int(self._right[k]),
            Fraction(int(self._scaled[k]), self._den),
            bool(self._odd[k]),
        )

    def failures(self) -> Iterator[tuple]:
        if isinstance(self._odd, np.ndarray):
            for k in np.flatnonzero(~self._odd):
                yield self[int(k)]
        else:
            for k, ok in enumerate(self._odd):
                if not ok:
                    yield self[k]


@dataclass(frozen=True)
class OddCertificate:
    set_size: int
    pair_results: PairResults
    verdict: bool

    def first_failure(self):
        return next(self.pair_results.failures(), None)

    def distances(self) -> list[Fraction]:
        return [d for _, _, d, _ in self.pair_results]

    def to_json_obj(self, one_based: bool = True) -> dict:
        shift = 1 if one_based else 0
        return {
            "set_size": self.set_size,
            "verdict": self.verdict,
            "pairs": [
                [i + shift, j + shift, format_rational(d), ok] for i, j, d, ok in self.pair_results
            ],
        }


def _pair_block_numpy(X: np.ndarray, rows: range, den: int):
    m = X.shape[0]
    lefts, rights, sums = [], [], []
    for i in rows:
        diffs = np.abs(X[i + 1 :] - X[i]).sum(axis=1)
        lefts.append(np.full(m - i - 1, i, dtype=np.int32))
        rights.append(np.arange(i + 1, m, dtype=np.int32))
        sums.append(diffs)
    if not sums:
        empty = np.zeros(0, dtype=np.int64)
        return empty.astype(np.int32), empty.astype(np.int32), empty
    return np.concatenate(lefts), np.concatenate(rights), np.concatenate(sums)


def verify_odd_set(ps: PointSet, workers: int = 1) -> OddCertificate:
    """Check every unordered pair exactly and report each distance.

    ``workers > 1`` splits the rows of the pair triangle into contiguous
    blocks; the certificate is identical for any worker count.
    """
    pts = ps.points
    m = len(pts)
    if m < 2:
        empty = np.zeros(0, dtype=np.int32)
        results = PairResults(empty, empty, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=bool), 1)
        return OddCertificate(m, results, True)

    X, den = scaled_integer_coords(pts)
    if isinstance(X, np.ndarray):
        blocks = _row_blocks(m, max(1, workers))
        if len(blocks) == 1:
            parts = [_pair_block_numpy(X, blocks[0], den)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(lambda rows: _pair_block_numpy(X, rows, den), blocks))
        left = np.concatenate([p[0] for p in parts])
        right = np.concatenate([p[1] for p in parts])
        sums = np.concatenate([p[2] for p in parts])
        odd = (sums % (2 * den)) == den
        verdict = bool(odd.all())
    else:
        left, right, sums, odd = [], [], [], []
        for i in range(m):
            xi = X[i]
            for j in range(i + 1, m):
                s = sum(abs(a - b) for a, b in zip(xi, X[j]))
                left.append(i)
                right.append(j)
                sums.append(s)
                odd.append(s % (2 * den) == den)
        verdict = all(odd)
    return OddCertificate(m, PairResults(left, right, sums, odd, den), verdict)


def _row_blocks(m: int, workers: int) -> list[range]:
    # balance by pair count: row i contributes m - 1 - i pairs
    if workers == 1:
        return [range(m)]
    total = m * (m - 1) // 2
    target = total / workers
    blocks, start, acc = [], 0, 0
    for i in range(m):
        acc += m - 1 - i
        if acc >= target and len(blocks) < workers - 1:
            blocks.append(range(start, i + 1))
            start, acc = i + 1, 0
    blocks.append(range(start, m))
    return [b for b in blocks if len(b)]


def phi_fingerprint(p: Sequence) -> tuple[int, ...]:
    bits = []
    for i, c in enumerate(p):
        c = as_rational(c)
        if c.denominator > 2:
            raise NotHalfIntegerError(
                f"coordinate {i + 1} = {format_rational(c)} is not in the half-integer lattice"
            )
        bits.append(1 if c.denominator == 2 else 0)
    return tuple(bits)


@dataclass(frozen=True)
class ParityAudit:
    fingerprints: list
    fiber_sizes: dict
    weight_parities: list = field(default_factory=list)

    @property
    def weight_parity_uniform(self) -> bool:
        return len(set(self.weight_parities)) <= 1

    @property
    def fibers_at_most_two(self) -> bool:
        return all(size <= 2 for size in self.fiber_sizes.values())

    @property
    def passes(self) -> bool:
        return self.weight_parity_uniform and self.fibers_at_most_two

    def to_json_obj(self) -> dict:
        def bits(fp):
            return "".join(map(str, fp))

        return {
            "fingerprints": [bits(fp) for fp in self.fingerprints],
            "fiber_sizes": {bits(fp): n for fp, n in sorted(self.fiber_sizes.items())},
            "weight_parities": self.weight_parities,
            "weight_parity_uniform": self.weight_parity_uniform,
            "fibers_at_most_two": self.fibers_at_most_two,
        }


def parity_audit(ps: PointSet) -> ParityAudit:
    """Fingerprint each point by which coordinates are strict half-integers.

    An odd-distance subset of the half-integer lattice has fingerprints of a
    single weight parity and at most two points per fingerprint.
    """
    fingerprints = []
    for k, p in enumerate(ps.points):
        try:
            fingerprints.append(phi_fingerprint(p))
        except NotHalfIntegerError as exc:
            raise NotHalfIntegerError(f"point {k + 1}: {exc}") from None
    parities = ["odd" if sum(fp) % 2 else "even" for fp in fingerprints]
    return ParityAudit(fingerprints, dict(Counter(fingerprints)), parities)
