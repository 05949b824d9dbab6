"""Exhaustive maximum odd-distance-set search inside bounded lattice boxes.

Odd-distance subsets of a finite point list are exactly the cliques of the
graph joining points at odd-integer l1 distance, so the search is a maximum
clique problem.  The solver is a branch-and-bound in the style of Tomita's
MCQ: adjacency rows are Python ints used as bitsets, candidates are greedily
colored in a fixed vertex order, and a branch is cut as soon as the current
size plus its color number cannot beat the incumbent.
"""

from __future__ import annotations

import itertools
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from oddset.errors import OddSetError, VertexLimitError
from oddset.exact_arith import as_rational, format_rational
from oddset.geometry import Point, PointSet, make_point, scaled_integer_coords

DEFAULT_VERTEX_LIMIT = 100_000
LATTICE_STEPS = {"int": Fraction(1), "half": Fraction(1, 2)}


def vertex_limit() -> int:
    raw = os.environ.get("ODDSET_VERTEX_LIMIT")
    if not raw:
        return DEFAULT_VERTEX_LIMIT
    try:
        limit = int(raw)
    except ValueError:
        raise OddSetError(f"ODDSET_VERTEX_LIMIT must be an integer, got {raw!r}") from None
    if limit < 1:
        raise OddSetError("ODDSET_VERTEX_LIMIT must be positive")
    return limit


@dataclass(frozen=True)
class LatticeBox:
    dimension: int
    lattice: str
    lower: tuple
    upper: tuple

    def __post_init__(self):
        if self.lattice not in LATTICE_STEPS:
            raise OddSetError(f"lattice must be 'int' or 'half', got {self.lattice!r}")
        if self.dimension < 1:
            raise OddSetError("box dimension must be positive")
        lower, upper = make_point(self.lower), make_point(self.upper)
        if len(lower) != self.dimension or len(upper) != self.dimension:
            raise OddSetError("box bounds do not match the box dimension")
        step = self.step
        for i, (lo, hi) in enumerate(zip(lower, upper)):
            if lo > hi:
                raise OddSetError(f"empty box in coordinate {i + 1}: {lo} > {hi}")
            if (lo / step).denominator != 1 or (hi / step).denominator != 1:
                raise OddSetError(
                    f"bounds {format_rational(lo)}..{format_rational(hi)} of coordinate {i + 1} "
                    f"are not on the {self.lattice} lattice"
                )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def cube(cls, dimension: int, lattice: str, lo, hi) -> "LatticeBox":
        lo, hi = as_rational(lo), as_rational(hi)
        return cls(dimension, lattice, (lo,) * dimension, (hi,) * dimension)

    @property
    def step(self) -> Fraction:
        return LATTICE_STEPS[self.lattice]

    def steps(self) -> list[int]:
        return [int((hi - lo) / self.step) + 1 for lo, hi in zip(self.lower, self.upper)]

    def count(self) -> int:
        total = 1
        for s in self.steps():
            total *= s
        return total

    def contains(self, p: Point) -> bool:
        return len(p) == self.dimension and all(
            lo <= c <= hi and (c / self.step).denominator == 1
            for c, lo, hi in zip(p, self.lower, self.upper)
        )


def enumerate_box(box: LatticeBox, limit: int | None = None) -> list[Point]:
    """All lattice points of the box in lexicographic order."""
    limit = vertex_limit() if limit is None else limit
    count = box.count()
    if count > limit:
        raise VertexLimitError(f"box holds {count} lattice points, above the limit of {limit}")
    axes = [
        [lo + k * box.step for k in range(n)] for lo, n in zip(box.lower, box.steps())
    ]
    return list(itertools.product(*axes))


@dataclass
class OddGraph:
    vertices: list
    rows: list  # rows[u] is an int bitset; bit v set iff u ~ v
    dimension: int

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(len(self.vertices)) for v in _bits(self.rows[u]) if u < v]


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _pack(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def build_odd_graph(points: Sequence[Sequence]) -> OddGraph:
    pts = [make_point(p) for p in points]
    if not pts:
        return OddGraph([], [], 1)
    dim = len(pts[0])
    X, den = scaled_integer_coords(pts)
    m = len(pts)
    rows = []
    if isinstance(X, np.ndarray):
        for u in range(m):
            sums = np.abs(X - X[u]).sum(axis=1)
            odd = (sums % (2 * den)) == den
            odd[u] = False
            rows.append(_pack(odd))
    else:
        for u in range(m):
            bits = 0
            for v in range(m):
                s = sum(abs(a - b) for a, b in zip(X[u], X[v]))
                if v != u and s % (2 * den) == den:
                    bits |= 1 << v
            rows.append(bits)
    return OddGraph(pts, rows, dim)


@dataclass(frozen=True)
class CliqueResult:
    max_size: int
    witness: PointSet
    nodes_explored: int
    elapsed: float  # seconds

    def to_json_obj(self) -> dict:
        return {
            "max_size": self.max_size,
            "witness": self.witness.to_json_obj(),
            "nodes_explored": self.nodes_explored,
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }


class _Solver:
    def __init__(self, nbr: list[int]):
        self.nbr = nbr
        self.best_size = 0
        self.best: list[int] = []
        self.lock = threading.Lock()

    def color_sort(self, P: int):
        nbr = self.nbr
        order, colors = [], []
        U, color = P, 0
        while U:
            color += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~nbr[v]
                Q ^= low
                U ^= low
                order.append(v)
                colors.append(color)
        return order, colors

    def offer(self, clique: list[int]) -> None:
        with self.lock:
            if len(clique) > self.best_size:
                self.best_size = len(clique)
                self.best = list(clique)

    def expand(self, P: int, chosen: list[int]) -> int:
        nodes = 1
        order, colors = self.color_sort(P)
        for k in range(len(order) - 1, -1, -1):
            if len(chosen) + colors[k] <= self.best_size:
                break
            v = order[k]
            chosen.append(v)
            sub = P & self.nbr[v]
            if sub:
                nodes += self.expand(sub, chosen)
            else:
                self.offer(chosen)
            chosen.pop()
            P ^= 1 << v
        return nodes

    def root_task(self, v: int, P: int, bound: int) -> int:
        if bound <= self.best_size:
            return 0
        if not P:
            self.offer([v])
            return 1
        return self.expand(P, [v])


def max_odd_clique(graph: OddGraph, threads: int = 1) -> CliqueResult:
    """Exact maximum clique of the odd-distance graph.

    Branching order is descending degree with lexicographic tie-break.  With
    ``threads > 1`` the root branches are shared among workers that read a
    common incumbent size; the maximum size does not depend on scheduling,
    though the witness may.
    """
    start = time.perf_counter()
    m = len(graph.vertices)
    if m == 0:
        return CliqueResult(0, PointSet(graph.dimension, ()), 0, time.perf_counter() - start)

    order = sorted(range(m), key=lambda u: (-graph.degree(u), graph.vertices[u]))
    perm = np.array(order)
    nbr = []
    for u in order:
        row = np.unpackbits(
            np.frombuffer(graph.rows[u].to_bytes((m + 7) // 8, "little"), dtype=np.uint8),
            bitorder="little",
        )[:m]
        nbr.append(_pack(row[perm]))

    solver = _Solver(nbr)
    root_order, root_colors = solver.color_sort((1 << m) - 1)
    tasks = []
    earlier = 0
    prefix = []
    for v in root_order:
        prefix.append(earlier)
        earlier |= 1 << v
    for k in range(m - 1, -1, -1):
        v = root_order[k]
        tasks.append((v, prefix[k] & nbr[v], root_colors[k]))

    if threads <= 1:
        nodes = 1
        for v, P, bound in tasks:
            if bound <= solver.best_size:
                break
            nodes += solver.root_task(v, P, bound)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            nodes = 1 + sum(pool.map(lambda t: solver.root_task(*t), tasks))

    witness = PointSet(graph.dimension, tuple(graph.vertices[order[k]] for k in sorted(solver.best)))
    return CliqueResult(solver.best_size, witness, nodes, time.perf_counter() - start)


def search_box(box: LatticeBox, threads: int = 1, limit: int | None = None) -> CliqueResult:
    return max_odd_clique(build_odd_graph(enumerate_box(box, limit)), threads=threads)


def lattice_cap(dimension: int, lattice: str) -> int:
    if lattice == "half":
        return 2**dimension
    if lattice == "int":
        return 2
    raise OddSetError(f"unknown lattice {lattice!r}")


@dataclass(frozen=True)
class BoundReport:
    dimension: int
    lattice: str
    max_size: int
    cap: int

    @property
    def violation(self) -> bool:
        return self.max_size > self.cap

    def summary(self) -> str:
        status = "VIOLATION" if self.violation else "ok"
        return (
            f"within box: max_size {self.max_size}, cap {self.cap} "
            f"({self.lattice} lattice, n = {self.dimension}): {status}"
        )

    def to_json_obj(self) -> dict:
        return {
            "max_size": self.max_size,
            "cap": self.cap,
            "lattice": self.lattice,
            "scope": "within box",
            "violation": self.violation,
        }


def bound_report(dimension: int, result: CliqueResult | int, lattice: str = "half") -> BoundReport:
    """Compare a box optimum with the lattice-wide cap.

    A violation means a bug in the search, never a counterexample.
    """
    size = result.max_size if isinstance(result, CliqueResult) else int(result)
    return BoundReport(dimension, lattice, size, lattice_cap(dimension, lattice))
