"""The doubling construction of a 2^n-point odd-distance set in the half-integer lattice.

Each round spreads the first coordinate so that consecutive points sit at
least 2 apart, then replaces that coordinate by a two-point gadget whose
coordinates sum to the old value.  The gadget pair is at distance 1, and
cross pairs keep their previous distance, so oddness carries over.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from oddset.errors import NotHalfIntegerError, OddSetError, SeparationError
from oddset.exact_arith import as_rational, format_rational
from oddset.geometry import Point, PointSet, format_point

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


@dataclass(frozen=True)
class Dim2Pair:
    target_sum: Fraction
    first: Point
    second: Point


def dim2_pair(x) -> Dim2Pair:
    """Two planar points at l1 distance 1 whose coordinates each sum to ``x``.

    All four coordinates lie within ``x/2 +- 1/2``.
    """
    x = as_rational(x)
    if x.denominator == 1:
        first = (x / 2 + HALF, x / 2 - HALF)
        second = (x / 2, x / 2)
    elif x.denominator == 2:
        first = (x / 2 + QUARTER, x / 2 - QUARTER)
        second = (x / 2 - QUARTER, x / 2 + QUARTER)
    else:
        raise NotHalfIntegerError(f"{format_rational(x)} is not a half-integer")
    return Dim2Pair(x, first, second)


def _sorted_by(points, coord: int) -> list:
    return sorted(points, key=lambda p: (p[coord], p))


def spread_translate(ps: PointSet, coord: int) -> PointSet:
    """Sort by ``coord`` (lexicographic tie-break) and add ``2*rank`` to it.

    Ranks are 1-based.  A pair at sorted ranks ``i < j`` moves apart by
    exactly ``2(j - i)``, so every distance changes by an even amount.
    """
    if not 0 <= coord < ps.dimension:
        raise OddSetError(f"coordinate index {coord} out of range for dimension {ps.dimension}")
    moved = []
    for rank, p in enumerate(_sorted_by(ps.points, coord), start=1):
        q = list(p)
        q[coord] += 2 * rank
        moved.append(tuple(q))
    return PointSet(ps.dimension, tuple(moved))


def check_spread(ps: PointSet, coord: int = 0) -> None:
    ordered = _sorted_by(ps.points, coord)
    for p, q in zip(ordered, ordered[1:]):
        if q[coord] - p[coord] < 2:
            raise SeparationError(
                f"points {format_point(p)} and {format_point(q)} are closer than 2 "
                f"in coordinate {coord + 1}"
            )


def extend_dimension(ps: PointSet) -> PointSet:
    """Split coordinate 0 of every point into a :func:`dim2_pair`.

    Requires the spread produced by :func:`spread_translate`; without it the
    gadgets of neighbouring points could interleave and distances would shrink.
    """
    check_spread(ps, 0)
    out = []
    for p in ps.points:
        pair = dim2_pair(p[0])
        rest = p[1:]
        out.append(pair.first + rest)
        out.append(pair.second + rest)
    return PointSet(ps.dimension + 1, tuple(out))


BASE_SET = PointSet(1, ((Fraction(0),), (Fraction(1),)))


def build_odd_set(n: int) -> PointSet:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise OddSetError(f"dimension must be a positive integer, got {n!r}")
    ps = BASE_SET
    for _ in range(n - 1):
        ps = extend_dimension(spread_translate(ps, 0))
    return ps
