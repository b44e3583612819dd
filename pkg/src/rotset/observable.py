"""Rotation vectors of finite orbit segments, sampled from many starting points."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteOrbit
from .maps import LiftedMap, displacement, eval_lift, power, translation_vector

DEFAULT_LENGTH = 1000
DEFAULT_SEED = 20130101
# starting points per orbit batch; fixed so results never depend on the worker count
BATCH = 4096


@dataclass(frozen=True)
class RotationSample:
    start: tuple[float, float]
    length: int
    vector: tuple[float, float]


@dataclass(frozen=True)
class SamplingPlan:
    mode: str = "random"  # "random" or "grid"
    count: int = 1000  # random mode: number of starts; grid mode: side of the grid
    length: int = DEFAULT_LENGTH
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.mode not in ("random", "grid"):
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        if self.count < 1 or self.length < 1:
            raise ValueError("count and length must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def n_samples(self) -> int:
        return self.count if self.mode == "random" else self.count * self.count


@dataclass(frozen=True)
class SampleSet:
    """Orbit-segment rotation vectors in canonical start order."""

    starts: np.ndarray  # (N, 2)
    length: int
    vectors: np.ndarray  # (N, 2)

    def __len__(self):
        return len(self.starts)

    def __getitem__(self, k) -> RotationSample:
        return RotationSample(tuple(self.starts[k]), self.length, tuple(self.vectors[k]))

    def __iter__(self):
        return (self[k] for k in range(len(self)))


def orbit_vectors(fmap: LiftedMap, starts, length: int) -> np.ndarray:
    """``(F^T(x) - x) / T`` for every row of ``starts``, iterating the full lift."""
    if length < 1:
        raise ValueError("orbit length must be >= 1")
    x0 = np.asarray(starts, dtype=float)
    shift = translation_vector(fmap)
    if shift is not None:
        # constant displacement: the average is the shift itself, exactly
        return np.broadcast_to(shift, x0.shape).copy()
    x = x0
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(length):
            x = eval_lift(fmap, x)
    if not np.all(np.isfinite(x)):
        raise NonFiniteOrbit(f"orbit of {fmap!r} left the finite range")
    return (x - x0) / length


def orbit_rotation_vector(fmap: LiftedMap, start, length: int) -> RotationSample:
    start = np.asarray(start, dtype=float)
    vec = orbit_vectors(fmap, start[None, :], length)[0]
    return RotationSample(tuple(start.tolist()), length, tuple(vec.tolist()))


def random_starts(seed: int, indices) -> np.ndarray:
    """Uniform points of [0,1)^2; the k-th depends only on ``(seed, k)``.

    Each start comes from one Philox block keyed by the seed at counter ``k``,
    so any subset of indices can be generated independently.
    """
    out = np.empty((len(indices), 2))
    for row, k in enumerate(indices):
        gen = np.random.Generator(np.random.Philox(key=int(seed), counter=int(k)))
        out[row] = gen.random(2)
    return out


def plan_starts(plan: SamplingPlan, start: int = 0, stop: int | None = None) -> np.ndarray:
    stop = plan.n_samples if stop is None else stop
    if plan.mode == "random":
        return random_starts(plan.seed, range(start, stop))
    idx = np.arange(start, stop, dtype=np.int64)
    i, j = np.divmod(idx, plan.count)
    return np.stack([i / plan.count, j / plan.count], axis=-1)


def sample_observable(fmap: LiftedMap, plan: SamplingPlan, workers: int = 1) -> SampleSet:
    total = plan.n_samples
    bounds = [(a, min(a + BATCH, total)) for a in range(0, total, BATCH)]

    def run(bound):
        starts = plan_starts(plan, *bound)
        return starts, orbit_vectors(fmap, starts, plan.length)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    starts = np.concatenate([p[0] for p in parts])
    vectors = np.concatenate([p[1] for p in parts])
    return SampleSet(starts, plan.length, vectors)


def mean_rotation_vector(fmap: LiftedMap, quadrature_side: int = 1024) -> np.ndarray:
    """Midpoint-rule Lebesgue average of the displacement over the torus."""
    m = int(quadrature_side)
    if m < 1:
        raise ValueError("quadrature side must be >= 1")
    shift = translation_vector(fmap)
    if shift is not None:
        return shift
    centers = (np.arange(m) + 0.5) / m
    total = np.zeros(2)
    # one row of cells at a time keeps memory at O(m)
    for cx in centers:
        pts = np.stack([np.full(m, cx), centers], axis=-1)
        total += displacement(fmap, pts).sum(axis=0)
    return total / (m * m)


def power_scaling_check(fmap: LiftedMap, q: int, start, length: int):
    """Orbit vector of ``F^q`` over ``T`` steps against ``q`` times that of ``F`` over ``qT``.

    ``start`` is one point or an ``(m, 2)`` array; the outputs match its shape.
    """
    start = np.asarray(start, dtype=float)
    pts = start.reshape(-1, 2)
    lhs = orbit_vectors(power(fmap, q), pts, length)
    rhs = q * orbit_vectors(fmap, pts, q * length)
    return lhs.reshape(start.shape), rhs.reshape(start.shape)
