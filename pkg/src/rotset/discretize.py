"""Spatial discretisation of lifted maps on n x n grids of the torus.

Node ``(i, j)`` stands for the torus point ``(i/n, j/n)`` and has flat index
``i*n + j``.  The discretised map snaps every image to its nearest grid point
(ties rounded towards +inf), so it is a functional graph; each of its cycles
carries an exact rational rotation vector.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

import numba
import numpy as np

from .errors import NonFiniteImage
from .maps import LiftedMap, eval_lift

# nodes per evaluation chunk; fixed so results never depend on the worker count
CHUNK = 1 << 16


@dataclass(frozen=True)
class Grid:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"grid side must be a positive integer, got {self.n!r}")

    @property
    def size(self) -> int:
        return self.n * self.n

    def points(self, start=0, stop=None) -> np.ndarray:
        idx = np.arange(start, self.size if stop is None else stop, dtype=np.int64)
        i, j = np.divmod(idx, self.n)
        return np.stack([i / self.n, j / self.n], axis=-1)


def round_half_up(t):
    return np.floor(np.asarray(t, dtype=float) + 0.5).astype(np.int64)


def project(point, grid: Grid) -> tuple[int, int]:
    """Nearest grid node of a torus point, ties broken towards +inf."""
    i, j = round_half_up(np.asarray(point, dtype=float) * grid.n) % grid.n
    return int(i), int(j)


@dataclass(frozen=True, order=True)
class RationalVector:
    """Exact vector ``(num_x, num_y) / den`` kept with ``gcd(num_x, num_y, den) == 1``."""

    num_x: int
    num_y: int
    den: int

    def __post_init__(self):
        if self.den == 0:
            raise ZeroDivisionError("zero denominator")
        g = math.gcd(math.gcd(self.num_x, self.num_y), self.den)
        sign = -1 if self.den < 0 else 1
        object.__setattr__(self, "num_x", int(sign * self.num_x // g))
        object.__setattr__(self, "num_y", int(sign * self.num_y // g))
        object.__setattr__(self, "den", int(sign * self.den // g))

    @property
    def x(self) -> Fraction:
        return Fraction(self.num_x, self.den)

    @property
    def y(self) -> Fraction:
        return Fraction(self.num_y, self.den)

    def __float__(self):
        raise TypeError("use to_float() for a 2-vector")

    def to_float(self) -> tuple[float, float]:
        return (self.num_x / self.den, self.num_y / self.den)

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class DiscretizedMap:
    grid: Grid
    successor: np.ndarray  # (n*n,) int64
    step_disp: np.ndarray  # (n*n, 2) int64, units of 1/n

    def check_consistency(self) -> bool:
        n = self.grid.n
        idx = np.arange(self.grid.size, dtype=np.int64)
        i, j = np.divmod(idx, n)
        succ = ((i + self.step_disp[:, 0]) % n) * n + (j + self.step_disp[:, 1]) % n
        return bool(np.array_equal(succ, self.successor))


class CycleRecord(NamedTuple):
    # a tuple rather than a frozen dataclass: grids can hold n^2 cycles
    period: int
    nodes: tuple[int, ...]  # flat indices, starting at the smallest one
    total_disp: tuple[int, int]  # units of 1/n
    rotation_vector: RationalVector
    basin_size: int


@dataclass(frozen=True)
class VectorEntry:
    vector: RationalVector
    multiplicity: int  # number of cycles
    basin_mass: int  # grid nodes attracted by those cycles


@dataclass(frozen=True)
class DiscretizedRotationSet:
    n: int
    cycles: tuple[CycleRecord, ...]

    @cached_property
    def vectors(self) -> tuple[VectorEntry, ...]:
        return _dedupe((c.rotation_vector, 1, c.basin_size) for c in self.cycles)

    def points(self) -> np.ndarray:
        return _as_points(self.vectors)


def _dedupe(items) -> tuple[VectorEntry, ...]:
    table: dict[RationalVector, list[int]] = {}
    for vec, mult, mass in items:
        slot = table.setdefault(vec, [0, 0])
        slot[0] += mult
        slot[1] += mass
    return tuple(VectorEntry(v, m, b) for v, (m, b) in sorted(table.items()))


def _as_points(entries) -> np.ndarray:
    if not entries:
        return np.empty((0, 2))
    return np.array([e.vector.to_float() for e in entries], dtype=float)


def build_discretized_map(fmap: LiftedMap, grid: Grid | int, workers: int = 1) -> DiscretizedMap:
    """Discretise ``fmap`` on ``grid``; node images are snapped with half-up rounding."""
    grid = grid if isinstance(grid, Grid) else Grid(grid)
    n, size = grid.n, grid.size
    step = np.empty((size, 2), dtype=np.int64)

    def fill(start):
        stop = min(start + CHUNK, size)
        pts = grid.points(start, stop)
        with np.errstate(over="ignore", invalid="ignore"):
            img = eval_lift(fmap, pts)
        if not np.all(np.isfinite(img)):
            raise NonFiniteImage(f"map produced a non-finite image on grid n={n}")
        step[start:stop] = round_half_up(img * n) - np.rint(pts * n).astype(np.int64)

    starts = range(0, size, CHUNK)
    if workers > 1 and size > CHUNK:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(fill, starts))
    else:
        for s in starts:
            fill(s)
    idx = np.arange(size, dtype=np.int64)
    i, j = np.divmod(idx, n)
    successor = ((i + step[:, 0]) % n) * n + (j + step[:, 1]) % n
    return DiscretizedMap(grid, successor, step)


@numba.njit(cache=True, nogil=True)
def _color_functional_graph(succ, step):
    """One pass over a functional graph.

    Returns per-node cycle labels, the concatenated cycle node lists (each
    rotated to start at its smallest node), per-cycle offsets and integer
    displacement sums.  Cycles are numbered in order of discovery when
    scanning start nodes by increasing index.
    """
    size = succ.shape[0]
    label = np.full(size, -1, np.int64)
    stamp = np.full(size, -1, np.int64)
    stack = np.empty(size, np.int64)
    cyc_nodes = np.empty(size, np.int64)
    offsets = np.zeros(size + 1, np.int64)
    disp = np.zeros((size, 2), np.int64)
    ncyc = 0
    filled = 0
    for s in range(size):
        if label[s] >= 0:
            continue
        top = 0
        v = s
        while label[v] < 0 and stamp[v] != s:
            stamp[v] = s
            stack[top] = v
            top += 1
            v = succ[v]
        if label[v] < 0:
            # v closes a new cycle
            cid = ncyc
            ncyc += 1
            lo = v
            u = succ[v]
            while u != v:
                if u < lo:
                    lo = u
                u = succ[u]
            u = lo
            while True:
                cyc_nodes[filled] = u
                filled += 1
                disp[cid, 0] += step[u, 0]
                disp[cid, 1] += step[u, 1]
                u = succ[u]
                if u == lo:
                    break
            offsets[cid + 1] = filled
        else:
            cid = label[v]
        for k in range(top):
            label[stack[k]] = cid
    return label, cyc_nodes[:filled], offsets[: ncyc + 1], disp[:ncyc]


def find_cycles(dmap: DiscretizedMap) -> list[CycleRecord]:
    """All cycles of the discretised map, each exactly once, with basin sizes."""
    n = dmap.grid.n
    label, nodes, offsets, disp = _color_functional_graph(dmap.successor, dmap.step_disp)
    basins = np.bincount(label, minlength=len(offsets) - 1).tolist()
    nodes, offsets, disp = nodes.tolist(), offsets.tolist(), disp.tolist()
    vectors: dict[tuple[int, int, int], RationalVector] = {}
    records = []
    for c in range(len(offsets) - 1):
        lo, hi = offsets[c], offsets[c + 1]
        dx, dy = disp[c]
        key = (dx, dy, hi - lo)
        vec = vectors.get(key)
        if vec is None:
            vec = vectors[key] = RationalVector(dx, dy, (hi - lo) * n)
        records.append(CycleRecord(hi - lo, tuple(nodes[lo:hi]), (dx, dy), vec, basins[c]))
    return records


def discretized_rotation_set(fmap: LiftedMap, n: int, workers: int = 1) -> DiscretizedRotationSet:
    dmap = build_discretized_map(fmap, Grid(n), workers=workers)
    return DiscretizedRotationSet(n, tuple(find_cycles(dmap)))


@dataclass(frozen=True)
class AsymptoticUnion:
    per_n: tuple[DiscretizedRotationSet, ...]

    @property
    def sides(self) -> list[int]:
        return [d.n for d in self.per_n]

    @cached_property
    def union(self) -> tuple[VectorEntry, ...]:
        return _dedupe((e.vector, e.multiplicity, e.basin_mass) for d in self.per_n for e in d.vectors)

    def points(self) -> np.ndarray:
        return _as_points(self.union)


def asymptotic_union(fmap: LiftedMap, n_min: int, n_max: int, step: int = 1,
                     workers: int = 1) -> AsymptoticUnion:
    """Discretised rotation sets for every side in ``range(n_min, n_max+1, step)`` and their union."""
    if not (1 <= n_min <= n_max) or step < 1:
        raise ValueError(f"invalid grid range {n_min}..{n_max} step {step}")
    sides = list(range(n_min, n_max + 1, step))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda n: discretized_rotation_set(fmap, n), sides))
    else:
        results = [discretized_rotation_set(fmap, n) for n in sides]
    return AsymptoticUnion(tuple(results))
