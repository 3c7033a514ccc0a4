"""Closed-form geometry of high-dimensional balls and cubes.

Volumes are assembled in log space: ``Gamma(d/2 + 1)`` overflows a double
near ``d = 340`` while the volumes themselves stay representable much longer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

from .special import reg_incomplete_beta


@dataclass(frozen=True)
class BallSpec:
    d: int
    r: float
    center_norm: float = 0.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.d!r}")
        if not math.isfinite(self.r) or self.r < 0:
            raise ValueError(f"radius must be finite and >= 0, got {self.r!r}")
        if self.center_norm < 0:
            raise ValueError("center_norm must be >= 0")

    @property
    def volume(self) -> float:
        return self.r ** self.d * unit_ball_volume(self.d)


def _check_dim(d) -> int:
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {d!r}")
    return int(d)


def log_unit_ball_volume(d: int) -> float:
    """``log V_d`` with ``V_d = pi^(d/2) / Gamma(d/2 + 1)``; valid for ``d >= 0``."""
    if int(d) != d or d < 0:
        raise ValueError(f"dimension must be a non-negative integer, got {d!r}")
    return 0.5 * d * math.log(math.pi) - special.gammaln(0.5 * d + 1.0)


def unit_ball_volume(d: int) -> float:
    return math.exp(log_unit_ball_volume(_check_dim(d)))


def unit_volume_radius(d: int) -> float:
    """Radius ``r_d`` of the ``d``-ball whose volume is exactly 1."""
    d = _check_dim(d)
    return math.exp(-log_unit_ball_volume(d) / d)


def matched_cube_radius(d: int, delta: float) -> float:
    """Radius of the ball with the same volume as the cube ``[-delta, delta]^d``."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    return 2.0 * delta * unit_volume_radius(d)


def cap_volume(d: int, r: float, h: float) -> float:
    """Volume of the cap cut from a ``d``-ball of radius ``r`` at distance ``h`` from its center.

    The cap is the part of the ball beyond the hyperplane at distance ``h``;
    ``h = 0`` gives half the ball and ``h = r`` gives an empty cap.
    """
    d = _check_dim(d)
    if r < 0:
        raise ValueError("radius must be >= 0")
    if not 0 <= h <= r:
        raise ValueError(f"need 0 <= h <= r, got h={h!r}, r={r!r}")
    if r == 0 or h == r:
        return 0.0
    if d == 1:
        return r - h
    # hyperspherical sector minus the cone over the (d-1)-ball base
    x = 1.0 - (h / r) ** 2
    sector = 0.5 * math.exp(d * math.log(r) + log_unit_ball_volume(d)) * \
        reg_incomplete_beta(x, 0.5 * (d - 1), 0.5)
    if h == 0:
        return sector
    cone = math.exp(math.log(h) - math.log(d) + 0.5 * (d - 1) * math.log(r * r - h * h)
                    + log_unit_ball_volume(d - 1))
    return max(sector - cone, 0.0)


def two_ball_intersection_volume(d: int, r: float, center_distance: float) -> float:
    """Volume of the lens shared by two radius-``r`` balls whose centers are ``center_distance`` apart."""
    if not r > 0:
        raise ValueError("radius must be positive")
    if center_distance < 0:
        raise ValueError("center_distance must be >= 0")
    if center_distance >= 2 * r:
        return 0.0
    return 2.0 * cap_volume(d, r, 0.5 * center_distance)


def concentration_band_bound(d: int, eps: float) -> float:
    """Hoeffding bound on ``P{ | ||X||^2 - d/3 | >= eps d }`` for ``X`` uniform on ``[-1, 1]^d``.

    Clipped to 1 since it is a probability bound.
    """
    d = _check_dim(d)
    if not eps > 0:
        raise ValueError("eps must be positive")
    return min(1.0, 2.0 * math.exp(-2.0 * d * eps * eps))
