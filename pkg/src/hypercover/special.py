"""Scalar special functions and small numeric kernels.

Everything here is pure and safe to call from concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import mpmath
import numpy as np
from scipy import integrate, special

SQRT_2PI = math.sqrt(2.0 * math.pi)
MAX_HERMITE_NODES = 180


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings for normal-weighted (or finite-interval) integration.

    ``domain`` is either ``"normal"`` (integrate ``f(s) phi(s)`` over the real
    line) or a ``(lo, hi)`` tuple for a plain finite integral.
    """

    node_count: int = 64
    domain: str | tuple[float, float] = "normal"
    target_abs_tol: float = 1e-10

    def __post_init__(self):
        if self.node_count < 2:
            raise ValueError("node_count must be >= 2")
        if not 0 <= self.target_abs_tol < 1:
            raise ValueError("target_abs_tol must lie in [0, 1)")
        if self.domain != "normal":
            lo, hi = self.domain
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"bad finite domain {self.domain!r}")
        elif self.node_count > MAX_HERMITE_NODES:
            # the check rule uses twice the nodes; numpy's Hermite weights overflow past ~370
            raise ValueError(f"node_count must be <= {MAX_HERMITE_NODES} for normal-weighted rules")


def std_normal_cdf(x):
    """Standard normal c.d.f., accurate in both tails."""
    return special.ndtr(x)


def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) / SQRT_2PI
    return out if out.ndim else float(out)


def reg_incomplete_beta(t, a, b):
    """Regularized incomplete beta function ``I_t(a, b)``."""
    if a <= 0 or b <= 0:
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    t_arr = np.asarray(t, dtype=float)
    if np.any((t_arr < 0) | (t_arr > 1)) or np.any(np.isnan(t_arr)):
        raise ValueError("t must lie in [0, 1]")
    out = special.betainc(a, b, t_arr)
    return out if out.ndim else float(out)


def _neumaier(values: Iterable[float]) -> float:
    total = 0.0
    comp = 0.0
    for v in values:
        v = float(v)
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def compensated_sum(terms, precision_bits: int = 53) -> float:
    """Sum ``terms`` without catastrophic cancellation.

    With ``precision_bits <= 53`` a Neumaier (improved Kahan) sum in native
    doubles is used. Larger values switch to mpmath floats carrying that many
    bits; terms may then be ints, Fractions, floats or ``mpf`` values and are
    converted exactly where possible.

    Raises
    ------
    OverflowError
        If an intermediate or the final value does not fit in a double.
    """
    if precision_bits < 1:
        raise ValueError("precision_bits must be positive")
    terms = list(terms)
    if precision_bits <= 53:
        floats = [float(t) for t in terms]
        if not all(math.isfinite(v) for v in floats):
            raise OverflowError("non-finite term in compensated_sum")
        total = _neumaier(floats)
        if not math.isfinite(total):
            raise OverflowError("compensated_sum overflowed")
        return total

    with mpmath.workprec(int(precision_bits)):
        acc = mpmath.mpf(0)
        for t in terms:
            if isinstance(t, Fraction):
                t = mpmath.mpf(t.numerator) / t.denominator
            t = mpmath.mpf(t)
            if not mpmath.isfinite(t):
                raise OverflowError("non-finite term in compensated_sum")
            acc += t
        result = float(acc)
    if not math.isfinite(result):
        raise OverflowError("compensated_sum result does not fit in a double")
    return result


def expected_max_std_normal(n: int, exact: bool = False) -> float:
    """Expectation of the maximum of ``n`` iid N(0, 1) variables.

    The default returns the rough ``sqrt(2 log n)``; ``exact=True`` integrates
    ``x * n phi(x) Phi(x)^(n-1)`` numerically.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if not exact:
        return math.sqrt(2.0 * math.log(n))
    if n == 1:
        return 0.0

    def density_moment(x):
        # log-space to keep Phi^(n-1) from underflowing noisily
        return x * math.exp(math.log(n) + special.log_ndtr(x) * (n - 1)) * std_normal_pdf(x)

    val, _ = integrate.quad(density_moment, -12.0, 12.0, points=[0.0, math.sqrt(2 * math.log(n))],
                            epsabs=1e-12, epsrel=1e-12, limit=200)
    return val


def normal_expectation(func: Callable[[np.ndarray], np.ndarray],
                       spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Integrate ``func`` against the standard normal density (or over a finite domain).

    Gauss-Hermite with ``spec.node_count`` nodes is tried first and checked
    against a rule with twice the nodes; if the two disagree by more than
    ``spec.target_abs_tol`` an adaptive rule on [-8, 8] takes over. ``func``
    must accept a 1-D array of abscissae.
    """
    if spec.domain != "normal":
        lo, hi = spec.domain
        x, w = np.polynomial.legendre.leggauss(spec.node_count)
        half = 0.5 * (hi - lo)
        coarse = half * float(np.dot(w, func(half * x + 0.5 * (hi + lo))))
        x2, w2 = np.polynomial.legendre.leggauss(2 * spec.node_count)
        fine = half * float(np.dot(w2, func(half * x2 + 0.5 * (hi + lo))))
        if abs(fine - coarse) <= spec.target_abs_tol:
            return fine
        val, _ = integrate.quad(lambda s: float(func(np.array([s]))[0]), lo, hi,
                                epsabs=spec.target_abs_tol, limit=500)
        return val

    def gauss_hermite(m):
        x, w = np.polynomial.hermite_e.hermegauss(m)
        return float(np.dot(w, func(x))) / SQRT_2PI

    coarse = gauss_hermite(spec.node_count)
    fine = gauss_hermite(2 * spec.node_count)
    if abs(fine - coarse) <= spec.target_abs_tol:
        return fine
    val, _ = integrate.quad(lambda s: float(func(np.array([s]))[0]) * std_normal_pdf(s),
                            -8.0, 8.0, points=[0.0], epsabs=max(spec.target_abs_tol, 1e-14),
                            epsrel=1e-10, limit=500)
    return val
