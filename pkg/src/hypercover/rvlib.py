"""Distributions of shifted squares and symmetric Beta coordinates.

``ShiftedSquareDist(x, delta)`` is the law of ``(xi - x)^2`` with ``xi``
uniform on ``[-delta, delta]``. Its square root ``|xi - x|`` drives the
cube-by-cubes coverage; the sum over coordinates drives ball coverage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ShiftedSquareDist:
    x: float
    delta: float = 1.0

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta!r}")


@dataclass(frozen=True)
class BetaSymmetric:
    """Beta(alpha, alpha) stretched affinely onto ``[-delta, delta]``."""

    alpha: float
    delta: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta!r}")


def _cdf_of_root(x: float, delta: float, s):
    """C.d.f. of ``|xi - x|`` at ``s`` (shared by the square and absolute-value laws)."""
    a = abs(x)
    s = np.asarray(s, dtype=float)
    inner = a <= delta
    out = np.where(
        s <= 0, 0.0,
        np.where(
            inner & (s < delta - a), s / delta,
            np.where(s <= delta + a, np.maximum((delta - a + s) / (2.0 * delta), 0.0), 1.0),
        ),
    )
    return out if out.ndim else float(out)


def shifted_square_cdf(dist: ShiftedSquareDist, t):
    """``P{(xi - x)^2 <= t}``; right-continuous and nondecreasing in ``t``."""
    t = np.asarray(t, dtype=float)
    return _cdf_of_root(dist.x, dist.delta, np.sqrt(np.maximum(t, 0.0)))


def shifted_square_pdf(dist: ShiftedSquareDist, t):
    """Density of ``(xi - x)^2``.

    The density is unbounded at ``t = 0`` when ``|x| <= delta``; asking for that
    exact point raises ``ValueError`` (integrate instead).
    """
    a, delta = abs(dist.x), dist.delta
    t = np.asarray(t, dtype=float)
    if a <= delta and np.any(t == 0):
        raise ValueError("density is infinite at t = 0")
    root = np.sqrt(np.where(t > 0, t, 1.0))
    lo, hi = (delta - a) ** 2, (delta + a) ** 2
    if a <= delta:
        out = np.where((t > 0) & (t < lo), 1.0 / (2.0 * delta * root),
                       np.where((t >= lo) & (t <= hi) & (t > 0), 1.0 / (4.0 * delta * root), 0.0))
    else:
        out = np.where((t > lo) & (t <= hi), 1.0 / (4.0 * delta * root), 0.0)
    return out if out.ndim else float(out)


def shifted_square_moments(dist: ShiftedSquareDist) -> tuple[float, float, float, float]:
    """Mean and 2nd-4th central moments of ``(xi - x)^2``."""
    x2, d2 = dist.x ** 2, dist.delta ** 2
    mean = x2 + d2 / 3.0
    var = 4.0 * d2 / 3.0 * (x2 + d2 / 15.0)
    mu3 = 16.0 * d2 * d2 / 15.0 * (x2 + d2 / 63.0)
    mu4 = 3.0 * mean * mu3
    return mean, var, mu3, mu4


def shifted_abs_cdf(x: float, delta: float, t):
    """``P{|xi - x| <= t}`` for ``xi`` uniform on ``[-delta, delta]``."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    return _cdf_of_root(x, delta, t)


def beta_symmetric_moments(dist: BetaSymmetric) -> tuple[float, float]:
    """Second and fourth raw moments of a coordinate."""
    a, d2 = dist.alpha, dist.delta ** 2
    mu2 = d2 / (2 * a + 1)
    mu4 = 3 * d2 * d2 / ((2 * a + 1) * (2 * a + 3))
    return mu2, mu4


def squared_norm_moments(d: int, dist: BetaSymmetric) -> tuple[float, float]:
    """Mean and variance of ``||Z||^2`` for ``Z`` with iid ``dist`` coordinates."""
    a, d4 = dist.alpha, dist.delta ** 4
    mean = d * dist.delta ** 2 / (2 * a + 1)
    var = 4 * d * d4 * a / ((2 * a + 1) ** 2 * (2 * a + 3))
    return mean, var


def pair_distance_moments(d: int, dist: BetaSymmetric) -> tuple[float, float]:
    """Mean and variance of ``||Z - Z'||^2`` for independent ``Z, Z'`` with iid ``dist`` coordinates."""
    a, d4 = dist.alpha, dist.delta ** 4
    mean = 2 * d * dist.delta ** 2 / (2 * a + 1)
    var = 4 * d * d4 * (4 * a + 3) / ((2 * a + 1) ** 2 * (2 * a + 3))
    return mean, var


def sample_beta_symmetric(dist: BetaSymmetric, size, rng: np.random.Generator) -> np.ndarray:
    """Draw from ``dist`` using the caller's generator (one stream per worker)."""
    return dist.delta * (2.0 * rng.beta(dist.alpha, dist.alpha, size=size) - 1.0)


def beta_symmetric_pdf(dist: BetaSymmetric, t):
    t = np.asarray(t, dtype=float)
    a, delta = dist.alpha, dist.delta
    log_norm = (1 - 2 * a) * math.log(2 * delta) - (2 * math.lgamma(a) - math.lgamma(2 * a))
    inside = np.abs(t) < delta
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.exp(log_norm + (a - 1) * np.log(np.where(inside, delta * delta - t * t, 1.0)))
    out = np.where(inside, val, 0.0)
    return out if out.ndim else float(out)
