"""Fraction of the cube ``[-1, 1]^d`` covered by a single ball ``B(Z, r)``.

``C(d, Z, r) = P{ ||U - Z|| <= r }`` for ``U`` uniform on the cube. The
squared distance is a sum of ``d`` independent shifted squares, so normal
approximations with a skewness correction work well once ``d`` is moderate.
They depend on ``Z`` only through ``||Z||^2``.

Two independent oracles are provided: plain Monte Carlo and numerical
inversion of the exact characteristic function of ``||U - Z||^2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sps

from . import montecarlo as mc
from .special import std_normal_cdf, std_normal_pdf

CF_MAX_DIM = 30
# stream tags private to this module
_CENTER_STREAM = 11
_VERTEX_STREAM = 12


class PointKind(str, enum.Enum):
    """Where the center sits; selects the correction multiplier ``c_d``."""

    DIAGONAL = "diagonal"
    TYPICAL = "typical"

    def multiplier(self, d: int) -> float:
        return 1.0 + (3.0 if self is PointKind.DIAGONAL else 4.0) / d


@dataclass(frozen=True)
class LocalCoverQuery:
    d: int
    z_norm_sq: float
    r: float
    point_kind: PointKind = PointKind.TYPICAL

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.d!r}")
        for name in ("z_norm_sq", "r"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")
        object.__setattr__(self, "point_kind", PointKind(self.point_kind))

    def with_radius(self, r: float) -> "LocalCoverQuery":
        return LocalCoverQuery(self.d, self.z_norm_sq, r, self.point_kind)


@dataclass(frozen=True)
class MomentTriple:
    mu: float
    sigma_sq: float
    mu3: float

    def __post_init__(self):
        if not self.sigma_sq > 0:
            raise ValueError("sigma_sq must be positive")


def rescale_query(d: int, z_prime_norm_sq: float, r_prime: float, delta: float,
                  point_kind: PointKind = PointKind.TYPICAL) -> LocalCoverQuery:
    """Map a ball question on ``[-delta, delta]^d`` to the unit-half-side cube.

    Scaling space by ``1/delta`` leaves volume fractions unchanged.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    return LocalCoverQuery(d, z_prime_norm_sq / delta ** 2, r_prime / delta, point_kind)


def moments(query: LocalCoverQuery) -> MomentTriple:
    """Mean, variance and third central moment of ``||U - Z||^2``."""
    z2, d = query.z_norm_sq, query.d
    return MomentTriple(z2 + d / 3.0, 4.0 / 3.0 * (z2 + d / 15.0), 16.0 / 15.0 * (z2 + d / 63.0))


def _t_value(query: LocalCoverQuery) -> float:
    m = moments(query)
    return (query.r ** 2 - m.mu) / math.sqrt(m.sigma_sq)


def _skew_term(query: LocalCoverQuery, t: float) -> float:
    z2, d = query.z_norm_sq, query.d
    coef = (z2 + d / 63.0) / (5.0 * math.sqrt(3.0) * (z2 + d / 15.0) ** 1.5)
    return coef * (1.0 - t * t) * float(std_normal_pdf(t))


def approx_normal(query: LocalCoverQuery) -> float:
    return float(std_normal_cdf(_t_value(query)))


def approx_petrov(query: LocalCoverQuery) -> float:
    """Normal approximation plus the first skewness term; may leave ``[0, 1]`` slightly."""
    t = _t_value(query)
    return float(std_normal_cdf(t)) + _skew_term(query, t)


def approx_adjusted(query: LocalCoverQuery) -> float:
    """Skewness-corrected approximation with the correction scaled by ``c_d``."""
    t = _t_value(query)
    return float(std_normal_cdf(t)) + query.point_kind.multiplier(query.d) * _skew_term(query, t)


def threshold_radius(d: int, z_norm_sq: float, beta: float) -> float:
    """Radius at which the normal approximation equals ``Phi(-beta)``."""
    spread = math.sqrt(z_norm_sq / 3.0 + d / 45.0)
    bracket = z_norm_sq + d / 3.0 - 2.0 * beta * spread
    if bracket < 0:
        beta_max = (z_norm_sq + d / 3.0) / (2.0 * spread)
        raise ValueError(f"beta={beta!r} gives a negative squared radius; beta must be <= {beta_max:.12g}")
    return math.sqrt(bracket)


def center_for(query: LocalCoverQuery, seed: int = 0) -> np.ndarray:
    """An explicit center with ``||Z||^2 = query.z_norm_sq`` matching ``point_kind``.

    Diagonal centers have equal coordinates; typical ones point in a random
    (seeded) direction.
    """
    d, norm = query.d, math.sqrt(query.z_norm_sq)
    if query.point_kind is PointKind.DIAGONAL:
        return np.full(d, norm / math.sqrt(d))
    g = mc.rng_for(seed, _CENTER_STREAM).standard_normal(d)
    return norm * g / np.linalg.norm(g)


def _sq_dist_chunks(z: np.ndarray, samples: int, seed: int, keys: tuple[int, ...],
                    half_side: float = 1.0, low: float = -1.0):
    """Per-chunk arrays of ``||U - z||^2`` for ``U`` uniform on ``[low, 1]^d * half_side``."""
    d = len(z)
    bounds = mc.chunk_bounds(samples)

    def work(i):
        lo, hi = bounds[i]
        u = mc.rng_for(seed, *keys, i).random((hi - lo, d))
        u = half_side * (low + (1.0 - low) * u)
        u -= z
        return np.einsum("ij,ij->i", u, u)

    return bounds, work


def mc_curve(z, radii, samples: int, seed: int, half_side: float = 1.0) -> list[mc.EstimateResult]:
    """Monte Carlo ``P{||U - z|| <= r}`` for several radii from one sample set.

    ``U`` is uniform on ``[-half_side, half_side]^d``. Each estimate has the
    binomial standard error ``sqrt(p (1 - p) / N)``.
    """
    z = np.asarray(z, dtype=float)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    r2 = np.sort(np.asarray(radii, dtype=float).ravel() ** 2)
    order = np.argsort(np.asarray(radii, dtype=float).ravel() ** 2, kind="stable")
    bounds, work = _sq_dist_chunks(z, samples, seed, (mc.TEST_POINTS,), half_side)

    def count(i):
        sq = np.sort(work(i))
        return np.searchsorted(sq, r2, side="right")

    hits = np.sum(mc.map_ordered(count, len(bounds)), axis=0)
    out = [None] * len(r2)
    for pos, k in enumerate(order):
        out[k] = mc.binomial_estimate(int(hits[pos]), samples, seed)
    return out


def mc_oracle(query: LocalCoverQuery, samples: int, seed: int, z=None) -> mc.EstimateResult:
    """Unbiased Monte Carlo estimate of ``C(d, Z, r)``.

    ``z`` gives explicit center coordinates; otherwise a center is built
    from ``query`` by :func:`center_for`.
    """
    if z is None:
        z = center_for(query, seed)
    z = np.asarray(z, dtype=float)
    if z.shape != (query.d,):
        raise ValueError(f"center must have {query.d} coordinates")
    return mc_curve(z, [query.r], samples, seed)[0]


def _half_integral(c: np.ndarray, s: np.ndarray) -> np.ndarray:
    """``int_0^c exp(i s v^2) dv`` for ``s > 0`` via Fresnel integrals."""
    scale = np.sqrt(np.pi / (2.0 * s))
    arg = np.abs(c) / scale
    fs, fc = sps.fresnel(arg)
    return np.sign(c) * scale * (fc + 1j * fs)


def coordinate_cf(z: float, s) -> np.ndarray:
    """Characteristic function of ``(xi - z)^2`` with ``xi`` uniform on ``[-1, 1]``, at ``s > 0``."""
    s = np.asarray(s, dtype=float)
    return 0.5 * (_half_integral(np.full_like(s, 1.0 - z), s) - _half_integral(np.full_like(s, -1.0 - z), s))


def _gl_panels(a: float, b: float, width: float, nodes: np.ndarray, weights: np.ndarray):
    count = max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, count + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return s, w


def cf_oracle(z, r: float, tol: float = 1e-10, max_panels: int = 50_000) -> float:
    """``C(d, Z, r)`` by inverting the characteristic function of ``||U - Z||^2``.

    The characteristic function is the product of per-coordinate factors,
    each a closed-form difference of Fresnel integrals. The c.d.f. at ``r^2``
    follows from the Gil-Pelaez formula; the integration range is doubled
    until the added piece and the characteristic function at the cut both
    fall below ``tol`` (or the panel budget runs out).
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    d = len(z)
    if d > CF_MAX_DIM:
        raise NotImplementedError(f"characteristic-function oracle is limited to d <= {CF_MAX_DIM}, got {d}")
    if r < 0:
        raise ValueError("radius must be >= 0")
    y = r * r
    lo_support = float(np.sum(np.maximum(np.abs(z) - 1.0, 0.0) ** 2))
    hi_support = float(np.sum((1.0 + np.abs(z)) ** 2))
    if y <= lo_support:
        return 0.0
    if y >= hi_support:
        return 1.0
    # the integrand's phase moves no faster than the distance from y to the support ends
    freq = max(hi_support - y, y - lo_support, 1.0)
    width = 0.5 * math.pi / freq
    nodes, weights = np.polynomial.legendre.leggauss(20)

    def piece(a, b):
        s, w = _gl_panels(a, b, width, nodes, weights)
        log_mod = np.zeros_like(s)
        phase = -s * y
        for zj in z:
            f = coordinate_cf(zj, s)
            log_mod += np.log(np.abs(f))
            phase += np.angle(f)
        vals = np.exp(log_mod) * np.sin(phase) / s
        return float(np.dot(w, vals)), float(np.exp(log_mod[-1]))

    upper = 8.0 * width
    total, _ = piece(0.0, upper)
    while True:
        add, tail_mod = piece(upper, 2.0 * upper)
        total += add
        upper *= 2.0
        if abs(add) < tol and tail_mod < tol:
            break
        if upper / width > max_panels:
            break
    return float(min(1.0, max(0.0, 0.5 - total / math.pi)))


def vertex_relation_check(d: int, r: float, samples: int, seed: int):
    """Monte Carlo estimates of both sides of ``C(d, V, r) = 2^-d C(d, 0, r)`` for a vertex ``V``.

    Valid for ``r <= 1``, where the part of the ball around ``V = (1, ..., 1)``
    inside the cube lies in the cell ``[0, 1]^d``. The left side samples that
    cell directly and multiplies by its volume share ``2^-d``; the right side
    is ``2^-d`` times a cube-wide estimate at the center. The two sides use
    independent streams. Returns ``(lhs, rhs)`` as :class:`EstimateResult`.
    """
    if r > 1:
        raise ValueError(f"the vertex relation needs r <= 1, got {r!r}")
    if r < 0:
        raise ValueError("radius must be >= 0")
    scale = 2.0 ** -d
    vertex = np.ones(d)
    bounds, work = _sq_dist_chunks(vertex, samples, seed, (_VERTEX_STREAM,), low=0.0)
    hits = sum(mc.map_ordered(lambda i: int(np.count_nonzero(work(i) <= r * r)), len(bounds)))
    cell = mc.binomial_estimate(hits, samples, seed)
    lhs = mc.EstimateResult(scale * cell.value, scale * cell.std_err, samples, 1, seed)
    center = mc_curve(np.zeros(d), [r], samples, seed)[0]
    rhs = mc.EstimateResult(scale * center.value, scale * center.std_err, samples, 1, seed)
    return lhs, rhs
