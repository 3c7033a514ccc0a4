"""Mean squared quantization error of a design over the cube ``[-1, 1]^d``.

``theta = min_i ||X - Z_i||^2`` for ``X`` uniform on the cube. Designs are
compared through ``n^(2/d) E theta``, which removes the leading dependence
on ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import montecarlo as mc
from .designs import Design, SchemeSpec
from .union_cover import (FrozenStudy, _replications, delta_grid, frozen_test_points, golden_refine,
                          min_sq_distances, replicate_distances)

DEFAULT_TEST_POINTS = 20_000
DEFAULT_REPLICATIONS = 50


@dataclass(frozen=True)
class QuantizeQuery:
    d: int
    n: int
    scheme: SchemeSpec
    normalize: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")


def _mean_of(sq: np.ndarray, seed) -> mc.EstimateResult:
    return mc.mean_estimate(float(sq.sum()), float(np.dot(sq, sq)), len(sq), seed)


def quantization_mc(design: Design | np.ndarray, test_points: int = DEFAULT_TEST_POINTS,
                    seed: int = 0) -> mc.EstimateResult:
    """Sample mean of the squared distance to the nearest design point."""
    pts = design.points if isinstance(design, Design) else np.asarray(design, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("design must contain at least one point")
    if test_points < 1:
        raise ValueError("test_points must be >= 1")
    sq = min_sq_distances(pts, frozen_test_points(pts.shape[1], test_points, seed))
    return _mean_of(sq, seed)


def _combine(dists: list[np.ndarray], seed) -> mc.EstimateResult:
    return mc.combine_replicates([_mean_of(sq, seed) for sq in dists], seed)


def quantization_mc_averaged(spec: SchemeSpec, d: int, n: int, test_points: int = DEFAULT_TEST_POINTS,
                             replications: int = DEFAULT_REPLICATIONS, seed: int = 0) -> mc.EstimateResult:
    """``E theta`` averaged over independent designs from ``spec``."""
    spec.check_dim(d)
    m = _replications(spec, replications)
    return _combine(replicate_distances(spec, d, n, test_points, m, seed), seed)


def quantization_approx(d: int, n: int, delta: float, corrected: bool = True) -> float:
    """Closed-form estimate of ``E theta`` for ``n`` iid uniform centers on ``[-delta, delta]^d``.

    ``(sqrt(d)/3) * (sqrt(d) (1 + delta^2) - c delta sqrt(1 + delta^2/5) sqrt(2 log n))``
    with ``c = 8/5`` (corrected) or ``c = 2``.
    """
    if not 0 <= delta <= 1:
        raise ValueError(f"delta must lie in [0, 1], got {delta!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    c = 1.6 if corrected else 2.0
    f_hat = math.sqrt(d) * (1.0 + delta ** 2) - c * delta * math.sqrt(1.0 + delta ** 2 / 5.0) \
        * math.sqrt(2.0 * math.log(n))
    return math.sqrt(d) / 3.0 * f_hat


def normalized_error(d: int, n: int, e_theta: float) -> float:
    """``n^(2/d) * e_theta``."""
    if e_theta < 0:
        raise ValueError("e_theta must be >= 0")
    return n ** (2.0 / d) * e_theta


def minimize_over_delta(spec: SchemeSpec, d: int, n: int, test_points: int = DEFAULT_TEST_POINTS,
                        replications: int = DEFAULT_REPLICATIONS, seed: int = 0,
                        step: float = 0.02) -> tuple[float, float]:
    """``(delta_star, min normalized error)`` over the scheme's ``delta`` range.

    The same test points and base designs serve every ``delta``, so the
    objective is a smooth deterministic function of ``delta``; a grid with
    spacing ``step`` is refined by golden-section search.
    """
    spec.check_dim(d)
    m = _replications(spec, replications)
    study = FrozenStudy(spec, d, n, test_points, m, seed)
    factor = n ** (2.0 / d)

    def objective(x):
        return factor * _combine(study.distances(float(x)), seed).value

    grid = delta_grid(spec, d, step)
    values = np.array([objective(x) for x in grid])
    return golden_refine(objective, grid, values, maximize=False)


def sweep_delta(spec: SchemeSpec, d: int, n: int, deltas, test_points: int = DEFAULT_TEST_POINTS,
                replications: int = DEFAULT_REPLICATIONS, seed: int = 0):
    """Normalized error at each ``delta`` as ``SweepRow`` records (``r`` left empty)."""
    from .union_cover import SweepRow

    spec.check_dim(d)
    m = _replications(spec, replications)
    study = FrozenStudy(spec, d, n, test_points, m, seed)
    factor = n ** (2.0 / d)
    rows = []
    for x in deltas:
        est = _combine(study.distances(float(x)), seed)
        rows.append(SweepRow(float(x), factor * est.value, factor * est.std_err, "mc", d, n, None,
                             spec.id.value, seed))
    return rows
