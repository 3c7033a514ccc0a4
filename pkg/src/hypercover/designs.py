"""Point-placement schemes inside (or around) the cube ``[-delta, delta]^d``.

Every random scheme draws one *base* design for ``delta = 1`` from a single
ordered stream and scales it by ``delta``. Two consequences follow:

* prefixes are nested (the first ``m`` points of an ``n``-point design equal
  the ``m``-point design for the same seed), and
* designs for different ``delta`` share their randomness, so sweeps over
  ``delta`` compare like with like.

====  ==========================================================
S1    iid uniform on the cube
S2    the origin followed by an S1 design with ``n - 1`` points
S3    two-level fractional factorial on the cube vertices
S4    iid coordinates from a symmetric Beta(alpha, alpha) law
S5    iid uniform in the ball of radius ``delta``
S6    iid uniform on the sphere of radius ``delta``
S7    Sobol points (the all-zero point first), mapped affinely
====  ==========================================================
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from . import montecarlo as mc
from .factorial import factorial_plan, two_level_design

# scipy's Sobol generator ships Joe-Kuo direction numbers up to this dimension
SOBOL_MAX_DIM = 21201


class Scheme(str, enum.Enum):
    S1 = "s1"
    S2 = "s2"
    S3 = "s3"
    S4 = "s4"
    S5 = "s5"
    S6 = "s6"
    S7 = "s7"

    @classmethod
    def parse(cls, value) -> "Scheme":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown scheme {value!r}; expected one of s1..s7") from None

    @property
    def random(self) -> bool:
        return self not in (Scheme.S3, Scheme.S7)

    @property
    def on_cube(self) -> bool:
        return self not in (Scheme.S5, Scheme.S6)


@dataclass(frozen=True)
class SchemeSpec:
    id: Scheme
    delta: float
    alpha: float | None = None
    nesting: bool = field(default=True)

    def __post_init__(self):
        object.__setattr__(self, "id", Scheme.parse(self.id))
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise ValueError(f"delta must be positive and finite, got {self.delta!r}")
        if self.id.on_cube and self.delta > 1:
            raise ValueError(f"{self.id.value}: delta must lie in (0, 1], got {self.delta!r}")
        if self.id is Scheme.S4:
            if self.alpha is None or not self.alpha > 0:
                raise ValueError("scheme s4 needs alpha > 0")
        elif self.alpha is not None:
            raise ValueError(f"alpha only applies to scheme s4, not {self.id.value}")
        object.__setattr__(self, "nesting", self.id is not Scheme.S3)

    def delta_range(self, d: int) -> tuple[float, float]:
        """Admissible ``delta`` interval for this scheme in dimension ``d``."""
        return (0.0, 1.0) if self.id.on_cube else (0.0, math.sqrt(d))

    def check_dim(self, d: int) -> None:
        if not self.id.on_cube and self.delta > math.sqrt(d) + 1e-12:
            raise ValueError(f"{self.id.value}: delta must be <= sqrt(d) = {math.sqrt(d):.6g}")

    def with_delta(self, delta: float) -> "SchemeSpec":
        return SchemeSpec(self.id, delta, self.alpha)

    def as_dict(self) -> dict:
        return {"id": self.id.value, "delta": self.delta, "alpha": self.alpha, "nesting": self.nesting}


@dataclass(frozen=True, eq=False)
class Design:
    """An ordered ``n x d`` point set with the scheme that produced it."""

    points: np.ndarray
    scheme: SchemeSpec
    seed: int | None = None
    label: str = ""

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("a design needs at least one point of dimension >= 1")
        if not np.all(np.isfinite(pts)):
            raise ValueError("design points must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def prefix(self, m: int) -> "Design":
        if not 1 <= m <= self.n:
            raise ValueError(f"prefix length must be in [1, {self.n}]")
        return Design(self.points[:m], self.scheme, self.seed, self.label)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{j + 1}" for j in range(self.d)])
        for row in self.points:
            w.writerow([format(v, ".17g") for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "scheme": self.scheme.as_dict(),
            "seed": self.seed,
            "label": self.label,
            "d": self.d,
            "n": self.n,
            "points": self.points.tolist(),
        }
        return json.dumps(payload, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Design":
        obj = json.loads(text)
        s = obj["scheme"]
        spec = SchemeSpec(s["id"], s["delta"], s.get("alpha"))
        return cls(np.array(obj["points"], dtype=float), spec, obj.get("seed"), obj.get("label", ""))


def read_points_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    return np.array([[float(v) for v in row] for row in rows[1:]], dtype=float)


def _check_size(d: int, n: int) -> None:
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {d!r}")
    if int(n) != n or n < 1:
        raise ValueError(f"design size must be an integer >= 1, got {n!r}")


def _uniform_base(d: int, n: int, seed: int) -> np.ndarray:
    rng = mc.rng_for(seed, mc.DESIGN)
    return 2.0 * rng.random((n, d)) - 1.0


def gen_scheme1(d: int, n: int, delta: float, seed: int) -> Design:
    _check_size(d, n)
    spec = SchemeSpec(Scheme.S1, delta)
    return Design(delta * _uniform_base(d, n, seed), spec, int(seed), "uniform in cube")


def gen_scheme2(d: int, n: int, delta: float, seed: int) -> Design:
    _check_size(d, n)
    spec = SchemeSpec(Scheme.S2, delta)
    pts = np.zeros((n, d))
    if n > 1:
        pts[1:] = delta * _uniform_base(d, n - 1, seed)
    return Design(pts, spec, int(seed), "origin + uniform in cube")


def gen_scheme3(d: int, n: int, delta: float) -> Design:
    _check_size(d, n)
    spec = SchemeSpec(Scheme.S3, delta)
    try:
        levels, info = two_level_design(d, n)
    except ValueError as exc:
        raise ValueError(f"scheme s3 unsupported for d={d}, n={n}: {exc}") from None
    return Design(delta * levels, spec, None, f"2^({d}-{d - info.runs.bit_length() + 1}) {info.label}")


def gen_scheme4(d: int, n: int, delta: float, alpha: float, seed: int) -> Design:
    _check_size(d, n)
    spec = SchemeSpec(Scheme.S4, delta, alpha)
    if alpha == 1.0:
        # Beta(1, 1) is uniform: reuse the uniform stream so the points coincide exactly
        base = _uniform_base(d, n, seed)
    else:
        rng = mc.rng_for(seed, mc.DESIGN)
        base = 2.0 * rng.beta(alpha, alpha, size=(n, d)) - 1.0
    return Design(delta * base, spec, int(seed), f"beta({alpha:g},{alpha:g}) coordinates")


def _directions(d: int, n: int, seed: int) -> np.ndarray:
    g = mc.rng_for(seed, mc.DIRECTION).standard_normal((n, d))
    norms = np.linalg.norm(g, axis=1)
    return g / norms[:, None]


def gen_scheme5(d: int, n: int, delta: float, seed: int) -> Design:
    _check_size(d, n)
    spec = SchemeSpec(Scheme.S5, delta)
    spec.check_dim(d)
    u = mc.rng_for(seed, mc.RADIUS).random(n)
    radii = delta * u ** (1.0 / d)
    return Design(radii[:, None] * _directions(d, n, seed), spec, int(seed), "uniform in ball")


def gen_scheme6(d: int, n: int, delta: float, seed: int) -> Design:
    _check_size(d, n)
    spec = SchemeSpec(Scheme.S6, delta)
    spec.check_dim(d)
    return Design(delta * _directions(d, n, seed), spec, int(seed), "uniform on sphere")


def sobol_unit(d: int, n: int) -> np.ndarray:
    """First ``n`` unscrambled Sobol points in ``[0, 1)^d``, starting at the zero vector."""
    _check_size(d, n)
    if d > SOBOL_MAX_DIM:
        raise ValueError(f"Sobol direction numbers available up to d={SOBOL_MAX_DIM}, got {d}")
    # prefixes of any length are wanted (nesting), so the power-of-two warning is noise
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="The balance properties", category=UserWarning)
        return qmc.Sobol(d, scramble=False).random(n)


def gen_scheme7(d: int, n: int, delta: float) -> Design:
    spec = SchemeSpec(Scheme.S7, delta)
    return Design(delta * (2.0 * sobol_unit(d, n) - 1.0), spec, None, "Sobol (zero point first)")


def generate(spec: SchemeSpec, d: int, n: int, seed: int | None = None) -> Design:
    """Dispatch to the generator for ``spec.id``; ``seed`` is ignored by deterministic schemes."""
    sid = spec.id
    if sid.random and seed is None:
        raise ValueError(f"scheme {sid.value} is random and needs a seed")
    if sid is Scheme.S1:
        return gen_scheme1(d, n, spec.delta, seed)
    if sid is Scheme.S2:
        return gen_scheme2(d, n, spec.delta, seed)
    if sid is Scheme.S3:
        return gen_scheme3(d, n, spec.delta)
    if sid is Scheme.S4:
        return gen_scheme4(d, n, spec.delta, spec.alpha, seed)
    if sid is Scheme.S5:
        return gen_scheme5(d, n, spec.delta, seed)
    if sid is Scheme.S6:
        return gen_scheme6(d, n, spec.delta, seed)
    return gen_scheme7(d, n, spec.delta)


def replicate_seed(seed: int, rep: int) -> int:
    """Seed of the ``rep``-th independent design in a replicated study."""
    return mc.derive_seed(seed, mc.DESIGN, rep)


def supported_factorial(d: int, n: int) -> bool:
    try:
        factorial_plan(d, n)
    except ValueError:
        return False
    return True
