"""Turn an approximately given real odd-distance set into an exact rational one.

Pipeline: separate every coordinate by at least 2, freeze the coordinate
order of every pair as a sign pattern, which turns each l1 distance into a
linear equation, solve the system exactly by Gauss-Jordan elimination, snap
the free variables to nearby simple rationals and read off the dependents.
Because every coordinate moves by less than 1 and neighbours are at least 2
apart, the sign pattern survives and the distances are reproduced exactly.

:func:`dyadic_scale` then multiplies by an odd integer to clear every odd
factor from the denominators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from oddset.construct import spread_translate
from oddset.errors import (
    DistanceToleranceError,
    DriftError,
    InconsistentSystemError,
    NotOddDistanceError,
    OddSetError,
    SeparationError,
)
from oddset.exact_arith import (
    as_rational,
    best_rational_in_interval,
    format_rational,
    odd_denominator_lcm,
)
from oddset.geometry import PointSet, l1_distance, make_point, verify_odd_set

DISTANCE_TOLERANCE = Fraction(1, 10**6)


@dataclass(frozen=True)
class DecimalPointSet:
    """Coordinates as exact decimal strings plus optional declared distances.

    ``distances`` maps 0-based pairs ``(i, j)``, ``i < j``, to odd integers.
    """

    dimension: int
    points: tuple
    distances: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = tuple(tuple(str(c) for c in p) for p in self.points)
        for k, p in enumerate(pts):
            if len(p) != self.dimension:
                raise OddSetError(f"point {k + 1} does not have {self.dimension} coordinates")
        object.__setattr__(self, "points", pts)
        norm = {}
        for (i, j), d in self.distances.items():
            i, j = min(i, j), max(i, j)
            if i == j or not 0 <= i < j < len(pts):
                raise OddSetError(f"declared distance for invalid pair ({i + 1}, {j + 1})")
            norm[(i, j)] = int(d)
        object.__setattr__(self, "distances", norm)

    @classmethod
    def from_points(cls, points: Sequence[Sequence], distances: dict | None = None):
        pts = [[str(c) for c in p] for p in points]
        return cls(len(pts[0]) if pts else 1, tuple(map(tuple, pts)), distances or {})

    def proxies(self) -> list[tuple]:
        return [make_point(p) for p in self.points]

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DecimalPointSet":
        try:
            dim, raw = obj["dim"], obj["points"]
        except (KeyError, TypeError):
            raise OddSetError('point-set JSON needs "dim" and "points"') from None
        distances = {}
        for entry in obj.get("distances", []):
            i, j, d = entry
            distances[(int(i) - 1, int(j) - 1)] = int(d)
        return cls(dim, tuple(tuple(str(c) for c in p) for p in raw), distances)


@dataclass(frozen=True)
class SignPattern:
    """``signs[(i, j)][k]`` is +1 if point i exceeds point j in coordinate k, else -1."""

    signs: dict

    def sign(self, p: int, q: int, coord: int) -> int:
        if p < q:
            return self.signs[(p, q)][coord]
        return -self.signs[(q, p)][coord]


@dataclass(frozen=True)
class LinearSystem:
    """One row per unordered pair; column ``p * n + i`` holds ``x_{p,i}``."""

    num_points: int
    dimension: int
    pairs: list
    rows: list  # dense integer coefficient lists
    rhs: list

    @property
    def variables(self) -> list[tuple[int, int]]:
        return [(p, i) for p in range(self.num_points) for i in range(self.dimension)]

    def residuals(self, values: Sequence[Fraction]) -> list[Fraction]:
        return [
            sum((c * v for c, v in zip(row, values) if c), Fraction(0)) - b
            for row, b in zip(self.rows, self.rhs)
        ]

    def is_satisfied_by(self, values: Sequence[Fraction]) -> bool:
        return not any(self.residuals(values))


@dataclass(frozen=True)
class RrefResult:
    num_columns: int
    pivots: list
    free: list
    offsets: dict  # dependent column -> a_g
    coefficients: dict  # dependent column -> {free column: b_fg}
    bound: Fraction  # max |b_fg|, 0 when there is nothing to bound

    def solve(self, free_values: dict) -> list[Fraction]:
        values = [Fraction(0)] * self.num_columns
        for f in self.free:
            values[f] = as_rational(free_values[f])
        for g in self.pivots:
            values[g] = self.offsets[g] + sum(
                (b * values[f] for f, b in self.coefficients[g].items()), Fraction(0)
            )
        return values


def ensure_separation(ps: PointSet) -> PointSet:
    """Spread every coordinate in turn so distinct points differ by >= 2 everywhere.

    Each pass changes distances by even integers only, so an odd-distance set
    stays one.
    """
    cert = verify_odd_set(ps)
    if not cert.verdict:
        i, j, d, _ = cert.first_failure()
        raise NotOddDistanceError(
            f"input is not an odd-distance set: pair ({i + 1}, {j + 1}) has distance "
            f"{format_rational(d)}"
        )
    for coord in range(ps.dimension):
        ps = spread_translate(ps, coord)
    return ps


def _separate_in_input_order(points: list[tuple]) -> list[tuple]:
    # same translation as ensure_separation, keeping each point at its input index
    pts = [list(p) for p in points]
    for coord in range(len(pts[0])):
        ranked = sorted(range(len(pts)), key=lambda k: (pts[k][coord], tuple(pts[k])))
        for rank, k in enumerate(ranked, start=1):
            pts[k][coord] += 2 * rank
    return [tuple(p) for p in pts]


def _sign_pattern(points: list[tuple]) -> SignPattern:
    signs = {}
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            row = []
            for k, (a, b) in enumerate(zip(points[i], points[j])):
                if a == b:
                    raise SeparationError(
                        f"points {i + 1} and {j + 1} tie in coordinate {k + 1}; "
                        "separate the set first"
                    )
                row.append(1 if a > b else -1)
            signs[(i, j)] = tuple(row)
    return SignPattern(signs)


def _system_from_signs(pattern: SignPattern, m: int, n: int, rhs: dict) -> LinearSystem:
    pairs, rows, values = [], [], []
    for i in range(m):
        for j in range(i + 1, m):
            row = [0] * (m * n)
            for k, s in enumerate(pattern.signs[(i, j)]):
                row[i * n + k] = s
                row[j * n + k] = -s
            pairs.append((i, j))
            rows.append(row)
            values.append(rhs[(i, j)])
    return LinearSystem(m, n, pairs, rows, values)


def assemble_system(ps: PointSet, distances: dict | None = None):
    """Linearize every pairwise distance of ``ps`` under its own sign pattern.

    With ``distances`` omitted the right-hand sides are the exact distances of
    ``ps`` and the coordinates of ``ps`` are checked to solve the system.
    """
    points = list(ps.points)
    pattern = _sign_pattern(points)
    m, n = len(points), ps.dimension
    exact = distances is None
    if exact:
        distances = {
            (i, j): l1_distance(points[i], points[j]) for i in range(m) for j in range(i + 1, m)
        }
    system = _system_from_signs(pattern, m, n, distances)
    if exact:
        values = [c for p in points for c in p]
        if not system.is_satisfied_by(values):
            raise InconsistentSystemError("point coordinates do not solve their own distance system")
    return pattern, system


def rref(system: LinearSystem) -> RrefResult:
    """Exact Gauss-Jordan elimination; pivot = leftmost nonzero column, first row."""
    ncols = system.num_points * system.dimension
    A = [[Fraction(c) for c in row] + [as_rational(b)] for row, b in zip(system.rows, system.rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        pick = next((k for k in range(r, len(A)) if A[k][c] != 0), None)
        if pick is None:
            continue
        A[r], A[pick] = A[pick], A[r]
        lead = A[r][c]
        if lead != 1:
            A[r] = [v / lead for v in A[r]]
        pivot_row = A[r]
        for k in range(len(A)):
            if k != r and A[k][c] != 0:
                factor = A[k][c]
                A[k] = [a - factor * b for a, b in zip(A[k], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    for k in range(r, len(A)):
        if A[k][-1] != 0:
            raise InconsistentSystemError(
                f"row {k + 1} reduces to 0 = {format_rational(A[k][-1])}"
            )
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    offsets, coefficients = {}, {}
    bound = Fraction(0)
    for row_idx, g in enumerate(pivots):
        row = A[row_idx]
        offsets[g] = row[-1]
        coefficients[g] = {f: -row[f] for f in free if row[f] != 0}
        for b in coefficients[g].values():
            bound = max(bound, abs(b))
    return RrefResult(ncols, pivots, free, offsets, coefficients, bound)


def _hint_values(hints) -> list[tuple]:
    if isinstance(hints, DecimalPointSet):
        return hints.proxies()
    if isinstance(hints, PointSet):
        return list(hints.points)
    return [make_point(p) for p in hints]


def perturb_and_solve(solved: RrefResult, hints, return_details: bool = False):
    """Snap free variables to simple rationals near their hints, solve the rest.

    Free variable ``f`` becomes the simplest rational within
    ``eps = 1 / (max(C, 1) * |P| * n)`` of its hint.  Each dependent then moves
    by less than 1 from its own hint, which is checked.
    """
    pts = _hint_values(hints)
    m, n = len(pts), len(pts[0])
    if m * n != solved.num_columns:
        raise OddSetError(f"hints give {m * n} values for {solved.num_columns} variables")
    flat = [c for p in pts for c in p]
    eps = Fraction(1, 1) / (max(solved.bound, 1) * m * n)
    chosen = {f: best_rational_in_interval(flat[f] - eps, flat[f] + eps) for f in solved.free}
    values = solved.solve(chosen)
    for g in solved.pivots:
        drift = abs(values[g] - flat[g])
        if drift >= 1:
            p, i = divmod(g, n)
            raise DriftError(
                f"coordinate {i + 1} of point {p + 1} drifted by {float(drift):.6g} >= 1; "
                "hints are not close to a solution"
            )
    out = PointSet(n, tuple(tuple(values[p * n : (p + 1) * n]) for p in range(m)))
    if return_details:
        return out, eps
    return out


def _target_distances(dps: DecimalPointSet, proxies: list[tuple]) -> dict:
    m = len(proxies)
    targets = {}
    for i in range(m):
        for j in range(i + 1, m):
            dist = l1_distance(proxies[i], proxies[j])
            if (i, j) in dps.distances:
                d = dps.distances[(i, j)]
            else:
                d = round(dist)
                if abs(dist - d) > DISTANCE_TOLERANCE:
                    raise DistanceToleranceError(
                        f"pair ({i + 1}, {j + 1}): distance {float(dist):.12g} is not within "
                        f"1e-6 of an integer"
                    )
            if d <= 0 or d % 2 == 0:
                raise NotOddDistanceError(
                    f"pair ({i + 1}, {j + 1}): distance rounds to {d}, which is not odd"
                )
            targets[(i, j)] = d
    return targets


@dataclass(frozen=True)
class Rationalized:
    points: PointSet
    targets: dict  # post-separation distance per 0-based pair
    separation_needed: list  # per coordinate: input had a gap below 2
    free_variables: int
    bound: Fraction
    epsilon: Fraction

    def provenance(self) -> dict:
        return {
            "separation_applied": self.separation_needed,
            "free_variables": self.free_variables,
            "C": format_rational(self.bound),
            "epsilon": format_rational(self.epsilon),
        }


def _needs_separation(points: list[tuple], coord: int) -> bool:
    values = sorted(p[coord] for p in points)
    return any(b - a < 2 for a, b in zip(values, values[1:]))


def rationalize_set(dps: DecimalPointSet, details: bool = False):
    """Exact rational odd-distance set with the same size as the decimal input.

    Output points keep the input order but carry the even translations of the
    separation step, so distances equal the post-separation targets.
    """
    proxies = dps.proxies()
    m, n = len(proxies), dps.dimension
    if m == 0:
        raise OddSetError("cannot rationalize an empty set")
    if len(set(proxies)) != m:
        raise OddSetError("input contains coincident points")
    targets = _target_distances(dps, proxies)
    needed = [_needs_separation(proxies, k) for k in range(n)]

    separated = _separate_in_input_order(proxies)
    # spreading moves each pair apart by an exact even integer per coordinate
    shifted = {
        (i, j): d
        + l1_distance(separated[i], separated[j])
        - l1_distance(proxies[i], proxies[j])
        for (i, j), d in targets.items()
    }
    pattern = _sign_pattern(separated)
    system = _system_from_signs(pattern, m, n, shifted)
    solved = rref(system)
    out, eps = perturb_and_solve(solved, separated, return_details=True)

    if not system.is_satisfied_by([c for p in out for c in p]):
        raise InconsistentSystemError("snapped solution does not satisfy the distance system")
    for (i, j), d in shifted.items():
        got = l1_distance(out[i], out[j])
        if got != d:
            raise SeparationError(
                f"pair ({i + 1}, {j + 1}) changed order under snapping: distance "
                f"{format_rational(got)} instead of {format_rational(d)}"
            )
    if not verify_odd_set(out).verdict:
        raise NotOddDistanceError("rationalized set failed verification")
    if details:
        return Rationalized(out, shifted, needed, len(solved.free), solved.bound, eps)
    return out


def dyadic_scale(ps: PointSet) -> tuple[PointSet, int]:
    """Multiply by the odd lcm of denominator odd parts; distances stay odd."""
    cert = verify_odd_set(ps)
    if not cert.verdict:
        i, j, d, _ = cert.first_failure()
        raise NotOddDistanceError(
            f"input is not an odd-distance set: pair ({i + 1}, {j + 1}) has distance "
            f"{format_rational(d)}"
        )
    if len(ps) == 0:
        return ps, 1
    scale = odd_denominator_lcm(ps.coordinates())
    return ps.scaled(scale), scale
