"""Deterministic chunked Monte Carlo.

Work is split into fixed-size chunks whose random streams are derived from
``(seed, stream keys..., chunk index)``. The chunk layout depends only on the
sample count, so estimates are bit-identical for any number of workers.
``HYPERCOVER_THREADS`` caps the worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence, TypeVar

import numpy as np

CHUNK_SIZE = 8192

# stream tags for derived seeds
TEST_POINTS = 1
DESIGN = 2
DIRECTION = 3
RADIUS = 4

T = TypeVar("T")


@dataclass(frozen=True)
class EstimateResult:
    value: float
    std_err: float
    samples: int
    design_replications: int = 1
    seed: int | None = None

    def __post_init__(self):
        if self.std_err < 0:
            raise ValueError("std_err must be >= 0")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    def as_dict(self) -> dict:
        return asdict(self)


def worker_count() -> int:
    raw = os.environ.get("HYPERCOVER_THREADS", "").strip()
    if raw:
        n = int(raw)
        if n < 1:
            raise ValueError("HYPERCOVER_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def seed_sequence(seed: int, *keys: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))


def derive_seed(seed: int, *keys: int) -> int:
    """A 63-bit integer seed derived from ``seed`` and a key path."""
    return int(seed_sequence(seed, *keys).generate_state(1, np.uint64)[0] >> np.uint64(1))


def rng_for(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, *keys))


def chunk_bounds(total: int, chunk: int = CHUNK_SIZE) -> list[tuple[int, int]]:
    if total < 1:
        raise ValueError("need at least one sample")
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def map_ordered(func: Callable[[int], T], count: int) -> list[T]:
    """``[func(0), ..., func(count - 1)]`` evaluated on the worker pool, in index order."""
    workers = min(worker_count(), count)
    if workers <= 1:
        return [func(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, range(count)))


def uniform_points(seed: int, keys: Sequence[int], d: int, total: int,
                   half_side: float = 1.0) -> list[np.ndarray]:
    """Uniform points on ``[-half_side, half_side]^d`` as a list of chunks."""
    bounds = chunk_bounds(total)

    def make(i):
        lo, hi = bounds[i]
        rng = rng_for(seed, *keys, i)
        return half_side * (2.0 * rng.random((hi - lo, d)) - 1.0)

    return map_ordered(make, len(bounds))


def binomial_estimate(hits: int, total: int, seed: int | None = None,
                      design_replications: int = 1) -> EstimateResult:
    p = hits / total
    return EstimateResult(p, math.sqrt(max(p * (1.0 - p), 0.0) / total), total,
                          design_replications, seed)


def mean_estimate(total_sum: float, total_sq: float, count: int,
                  seed: int | None = None) -> EstimateResult:
    mean = total_sum / count
    if count > 1:
        var = max(total_sq - count * mean * mean, 0.0) / (count - 1)
    else:
        var = 0.0
    return EstimateResult(mean, math.sqrt(var / count), count, 1, seed)


def combine_replicates(estimates: Sequence[EstimateResult], seed: int | None = None) -> EstimateResult:
    """Average per-design estimates; the spread between them carries both noise sources."""
    m = len(estimates)
    if m == 0:
        raise ValueError("no replicates to combine")
    values = np.array([e.value for e in estimates])
    if m == 1:
        se = estimates[0].std_err
    else:
        se = float(values.std(ddof=1) / math.sqrt(m))
    return EstimateResult(float(values.mean()), se, sum(e.samples for e in estimates) // m, m, seed)
