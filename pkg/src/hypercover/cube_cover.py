"""Covering the cube ``[-1, 1]^d`` by ``n`` smaller cubes of half-side ``r``.

A small cube around ``Z`` contains ``U`` iff ``|u_j - z_j| <= r`` for every
coordinate, so single-cube fractions factor into one-dimensional c.d.f.s.
For ``n`` iid uniform centers on ``[-delta, delta]^d`` the expected covered
fraction follows from the binomial theorem:

    C = 1 - sum_k (-1)^k binom(n, k) I_k^d,

with ``I_k`` the average over a test coordinate of the ``k``-th power of the
per-coordinate hit probability. The alternating sum loses roughly ``n`` bits
to cancellation, so it is evaluated in multiprecision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from . import montecarlo as mc
from .designs import gen_scheme1, replicate_seed
from .estimators import BallCover
from .rvlib import shifted_abs_cdf

MAX_CLOSED_FORM_N = 4096
BOUNDARY_SLACK = 1e-9


class PrecisionError(ArithmeticError):
    """The alternating binomial sum left ``[0, 1]``: precision was insufficient."""


@dataclass(frozen=True)
class CubeCoverQuery:
    d: int
    n: int
    r: float
    delta: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.d!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValueError("r must be finite and >= 0")
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta must lie in (0, 1], got {self.delta!r}")


def marginal_cdf_G(z: float, r):
    """``P{|xi - z| <= r}`` for ``xi`` uniform on ``[-1, 1]``."""
    return shifted_abs_cdf(z, 1.0, r)


def single_cube_fraction(z, r: float) -> float:
    """Fraction of ``[-1, 1]^d`` inside the cube of half-side ``r`` centered at ``z``."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    return float(np.prod(marginal_cdf_G_vec(z, r)))


def marginal_cdf_G_vec(z: np.ndarray, r: float) -> np.ndarray:
    return np.array([marginal_cdf_G(float(zj), r) for zj in z])


def rescaled_fraction(z_prime, r_prime: float, delta: float) -> float:
    """Single-cube fraction of ``[-delta, delta]^d`` (same as the unit problem scaled by ``1/delta``)."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    return single_cube_fraction(np.asarray(z_prime, dtype=float) / delta, r_prime / delta)


def _ik_terms(k, r, delta, power, one):
    """Shared branch logic; ``power``/``one`` let the same code run in floats or mpmath."""
    if k == 0:
        return one
    if r - delta >= 1:
        return one
    low = max(0 * one, (delta + r - 1) / (2 * delta))
    if r <= delta:
        rho = r / delta
        return (delta - r) * power(rho, k) + 2 * delta / (k + 1) * (power(rho, k + 1) - power(low, k + 1))
    return (r - delta) + 2 * delta / (k + 1) * (one - power(low, k + 1))


def ik_integral(k: int, r: float, delta: float) -> float:
    """``I_k = int_0^1 P{|u - z| <= r}^k du`` with ``z`` uniform on ``[-delta, delta]``.

    Piecewise closed form in three regimes: ``r <= delta``,
    ``delta < r < delta + 1`` and ``r >= delta + 1`` (where ``I_k = 1``).
    """
    if int(k) != k or k < 0:
        raise ValueError("k must be a non-negative integer")
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta!r}")
    if r < 0:
        raise ValueError("r must be >= 0")
    val = _ik_terms(int(k), float(r), float(delta), pow, 1.0)
    return float(min(1.0, max(0.0, val)))


def ik_integral_mp(k: int, r, delta):
    """:func:`ik_integral` in the current mpmath precision."""
    return _ik_terms(int(k), mpmath.mpf(r), mpmath.mpf(delta), mpmath.power, mpmath.mpf(1))


def ik_quadrature(k: int, r: float, delta: float) -> float:
    """Direct numerical integration of the defining integral (reference for the branches)."""
    from scipy import integrate

    def g(u):
        return shifted_abs_cdf(u / delta, 1.0, r / delta) ** k

    # integrand kinks where the hit probability changes regime
    pts = sorted({p for p in (delta - r, r - delta, delta + r) if 0 < p < 1})
    val, _ = integrate.quad(g, 0.0, 1.0, points=pts or None, limit=200, epsabs=1e-14, epsrel=1e-13)
    return val


def expected_coverage_closed_form(query: CubeCoverQuery) -> float:
    """Expected covered fraction for ``n`` iid uniform centers on ``[-delta, delta]^d``.

    Evaluated with ``n + 64`` bits so the alternating binomial sum keeps full
    double accuracy. Results within ``1e-9`` outside ``[0, 1]`` are clamped;
    anything further out raises :class:`PrecisionError`.
    """
    d, n = query.d, query.n
    if n > MAX_CLOSED_FORM_N:
        raise ValueError(f"n={n} exceeds the closed-form budget of {MAX_CLOSED_FORM_N}")
    with mpmath.workprec(n + 64):
        total = mpmath.mpf(0)
        binom = mpmath.mpf(1)
        for k in range(n + 1):
            term = binom * mpmath.power(ik_integral_mp(k, query.r, query.delta), d)
            total += -term if k % 2 else term
            binom = binom * (n - k) / (k + 1)
        value = float(1 - total)
    if value < -BOUNDARY_SLACK or value > 1 + BOUNDARY_SLACK:
        raise PrecisionError(f"closed form gave {value!r}; raise the working precision")
    return min(1.0, max(0.0, value))


def cube_cover_curve(d: int, n: int, radii, delta: float, test_points: int = 100_000,
                     design_replications: int = 20, seed: int = 0) -> list[mc.EstimateResult]:
    """Monte Carlo expected L-infinity coverage for several half-sides from one sample set."""
    radii = [float(r) for r in radii]
    per = [[] for _ in radii]
    for k in range(design_replications):
        design = gen_scheme1(d, n, delta, replicate_seed(seed, k))
        model = BallCover(metric="chebyshev").fit(design.points)
        chunks = mc.uniform_points(seed, (mc.TEST_POINTS, k), d, test_points)
        dist = np.concatenate(mc.map_ordered(lambda i: model.nearest(chunks[i])[0], len(chunks)))
        for j, r in enumerate(radii):
            per[j].append(mc.binomial_estimate(int(np.count_nonzero(dist <= r)), test_points, seed))
    return [mc.combine_replicates(p, seed) for p in per]


def cube_cover_mc(d: int, n: int, r: float, delta: float, test_points: int = 100_000,
                  design_replications: int = 20, seed: int = 0) -> mc.EstimateResult:
    """Monte Carlo estimate of the expected covered fraction (designs and test points both random)."""
    CubeCoverQuery(d, n, r, delta)
    return cube_cover_curve(d, n, [r], delta, test_points, design_replications, seed)[0]
