"""Coverage of the cube ``[-1, 1]^d`` by the union of ``n`` equal balls.

``C(Z_n, r)`` is the volume fraction of the cube within distance ``r`` of
some design point. It is estimated by Monte Carlo over uniform test points
(optionally averaged over independent random designs) and approximated
analytically for iid uniform designs on ``[-delta, delta]^d``.

Searches over ``r`` and ``delta`` reuse one frozen set of test points and
scale a fixed base design by ``delta``, so the objective is free of
sampling noise along the search.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, optimize

from . import montecarlo as mc
from .designs import Design, SchemeSpec, generate, replicate_seed
from .estimators import NearestCenter
from .special import QuadratureSpec, normal_expectation, std_normal_cdf, std_normal_pdf

DEFAULT_TEST_POINTS = 100_000
DEFAULT_REPLICATIONS = 50
DELTA_STEP = 0.02
DELTA_TOL = 0.005
# optimizers never search centers further out than this for ball/sphere schemes
DELTA_CAP_OFF_CUBE = 3.0

CSV_HEADER = ("delta", "value", "stderr", "method", "d", "n", "r", "scheme", "seed")


@dataclass(frozen=True)
class CoverageQuery:
    d: int
    n: int
    r: float
    scheme: SchemeSpec
    target: float = 0.9

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("radius must be >= 0")
        if not 0 < self.target < 1:
            raise ValueError("target must lie in (0, 1)")


@dataclass(frozen=True)
class SweepRow:
    delta: float
    value: float
    stderr: float
    method: str
    d: int
    n: int
    r: float
    scheme: str
    seed: int | None = None

    def csv_fields(self) -> list[str]:
        def num(v):
            return "" if v is None else format(float(v), ".17g")

        return [num(self.delta), num(self.value), num(self.stderr), self.method, str(self.d),
                str(self.n), num(self.r), self.scheme, "" if self.seed is None else str(self.seed)]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.csv_fields())
    return buf.getvalue()


def rows_from_csv(text: str) -> list[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames!r}")

    def opt(v, cast):
        return None if v == "" else cast(v)

    return [SweepRow(opt(r["delta"], float), float(r["value"]), float(r["stderr"]), r["method"],
                     int(r["d"]), int(r["n"]), opt(r["r"], float), r["scheme"], opt(r["seed"], int))
            for r in reader]


def rows_to_json(rows, provenance: dict | None = None) -> str:
    return json.dumps({"provenance": provenance or {}, "rows": [asdict(r) for r in rows]}, indent=1)


# ---------------------------------------------------------------- Monte Carlo

def frozen_test_points(d: int, test_points: int, seed: int, rep: int = 0) -> list[np.ndarray]:
    """Frozen uniform test points on ``[-1, 1]^d`` for replicate ``rep``."""
    return mc.uniform_points(seed, (mc.TEST_POINTS, rep), d, test_points)


def min_sq_distances(points: np.ndarray, chunks: list[np.ndarray]) -> np.ndarray:
    """Squared distance from every test point to its nearest design point, in test-point order."""
    model = NearestCenter().fit(points)
    parts = mc.map_ordered(lambda i: model.nearest(chunks[i])[0], len(chunks))
    return np.concatenate(parts)


def coverage_mc(design: Design | np.ndarray, r: float, test_points: int = DEFAULT_TEST_POINTS,
                seed: int = 0) -> mc.EstimateResult:
    """Fraction of uniform test points within distance ``r`` of the design."""
    if test_points < 1:
        raise ValueError("test_points must be >= 1")
    pts = design.points if isinstance(design, Design) else np.asarray(design, dtype=float)
    sq = min_sq_distances(pts, frozen_test_points(pts.shape[1], test_points, seed))
    return mc.binomial_estimate(int(np.count_nonzero(sq <= r * r)), test_points, seed)


def _replications(spec: SchemeSpec, m: int) -> int:
    if m < 1:
        raise ValueError("design_replications must be >= 1")
    if not spec.id.random and m > 1:
        warnings.warn(f"scheme {spec.id.value} is deterministic; using a single design", stacklevel=3)
        return 1
    return m


def replicate_distances(spec: SchemeSpec, d: int, n: int, test_points: int, reps: int,
                        seed: int) -> list[np.ndarray]:
    """Nearest-center squared distances for each of ``reps`` independent designs."""
    out = []
    for k in range(reps):
        design = generate(spec, d, n, replicate_seed(seed, k))
        out.append(min_sq_distances(design.points, frozen_test_points(d, test_points, seed, k)))
    return out


def _summarize(dists: list[np.ndarray], r: float, seed: int) -> mc.EstimateResult:
    per = [mc.binomial_estimate(int(np.count_nonzero(sq <= r * r)), len(sq), seed) for sq in dists]
    return mc.combine_replicates(per, seed)


def coverage_mc_averaged(spec: SchemeSpec, d: int, n: int, r: float,
                         test_points: int = DEFAULT_TEST_POINTS,
                         design_replications: int = DEFAULT_REPLICATIONS,
                         seed: int = 0) -> mc.EstimateResult:
    """Coverage averaged over independent designs from ``spec``.

    The standard error is the spread of the per-design estimates over
    ``sqrt(M)``, which carries both design and test-point noise. Deterministic
    schemes use one design (with a warning when ``M > 1``).
    """
    spec.check_dim(d)
    m = _replications(spec, design_replications)
    return _summarize(replicate_distances(spec, d, n, test_points, m, seed), r, seed)


def mc_radius_for_target(dists: list[np.ndarray], target: float) -> float:
    """Smallest ``r`` whose pooled covered fraction reaches ``target``.

    With equal test-point counts per replicate the pooled fraction equals the
    replicate average, so the answer is an order statistic of the pooled
    distances (exact, monotone in ``target``).
    """
    pooled = np.sort(np.concatenate(dists))
    k = max(1, math.ceil(target * len(pooled) - 1e-9))
    return float(math.sqrt(pooled[k - 1]))


# ---------------------------------------------------------------- approximations

def _union_integrand(d: int, n: int, r: float, delta: float, corrected: bool):
    rd2 = (r / delta) ** 2
    s_max = 3.0 * d / delta ** 2

    def psi(s):
        sp = np.clip((d + 2.0 * s * math.sqrt(d / 5.0)) / delta ** 2, 0.0, s_max)
        c = (3.0 * rd2 - sp - d) / (2.0 * np.sqrt(sp + d / 5.0))
        p = std_normal_cdf(c)
        if corrected:
            p = p + (1.0 + 4.0 / d) * (sp + d / 21.0) / (5.0 * (sp + d / 5.0) ** 1.5) \
                * (1.0 - c * c) * std_normal_pdf(c)
        return np.exp(-n * np.clip(p, 0.0, 1.0))

    return psi


def _union_approx(d: int, n: int, r: float, delta: float, corrected: bool) -> float:
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta!r}")
    if r < 0:
        raise ValueError("radius must be >= 0")
    if r == 0:
        # zero-volume balls; the normal tail would otherwise leave a spurious positive mass
        return 0.0
    psi = _union_integrand(d, n, r, delta, corrected)
    # psi moves from ~0 to ~1 over a narrow window; adaptive quadrature against phi handles it
    val, _ = integrate.quad(lambda s: float(psi(np.array(s))) * float(std_normal_pdf(s)),
                            -9.0, 9.0, limit=400, epsabs=1e-12, epsrel=1e-10)
    return float(min(1.0, max(0.0, 1.0 - val)))


def coverage_approx1(d: int, n: int, r: float, delta: float) -> float:
    """Union coverage of ``n`` iid uniform centers from the plain normal approximation."""
    return _union_approx(d, n, r, delta, corrected=False)


def coverage_approx2(d: int, n: int, r: float, delta: float) -> float:
    """Union coverage with the skewness-corrected single-ball approximation (``c_d = 1 + 4/d``)."""
    return _union_approx(d, n, r, delta, corrected=True)


def coverage_approx_gh(d: int, n: int, r: float, delta: float, corrected: bool = True,
                       spec: QuadratureSpec = QuadratureSpec(node_count=64)) -> float:
    """Same integral via Gauss-Hermite nodes (cross-check for the adaptive rule)."""
    psi = _union_integrand(d, n, r, delta, corrected)
    return 1.0 - normal_expectation(psi, spec)


# ---------------------------------------------------------------- searches

def _bisect_increasing(func, target: float, hi: float, xtol: float = 1e-6) -> float:
    """Smallest ``r`` in ``[0, hi]`` with ``func(r) >= target`` for nondecreasing ``func``."""
    if func(hi) < target:
        raise ValueError(f"target {target} not reached for r <= {hi:.6g}")
    lo = 0.0
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if func(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def radius_for_target(spec: SchemeSpec, d: int, n: int, target: float = 0.9,
                      method: str = "approx2", test_points: int = DEFAULT_TEST_POINTS,
                      design_replications: int = DEFAULT_REPLICATIONS, seed: int = 0) -> float:
    """Smallest radius whose (expected) coverage reaches ``target``.

    ``method='mc'`` inverts the pooled coverage of frozen test points exactly;
    ``method='approx2'`` (iid uniform designs only) bisects the approximation.
    """
    if not 0 < target < 1:
        raise ValueError("target must lie in (0, 1)")
    bound = 2.0 * math.sqrt(d) * max(1.0, spec.delta)
    if method == "mc":
        spec.check_dim(d)
        m = _replications(spec, design_replications)
        r = mc_radius_for_target(replicate_distances(spec, d, n, test_points, m, seed), target)
        if r > bound:
            raise ValueError(f"target {target} not reached for r <= {bound:.6g}")
        return r
    if method in ("approx1", "approx2"):
        func = coverage_approx2 if method == "approx2" else coverage_approx1
        return _bisect_increasing(lambda r: func(d, n, r, spec.delta), target, bound)
    raise ValueError(f"unknown method {method!r}")


def delta_grid(spec: SchemeSpec, d: int, step: float = DELTA_STEP) -> np.ndarray:
    lo, hi = spec.delta_range(d)
    if not spec.id.on_cube:
        hi = min(hi, DELTA_CAP_OFF_CUBE)
    count = int(math.floor((hi - lo) / step + 1e-9))
    return np.round(lo + step * np.arange(1, count + 1), 10)


def golden_refine(func, grid: np.ndarray, values: np.ndarray, maximize: bool, tol: float = DELTA_TOL):
    """Polish the best grid point by golden-section search on its neighbouring cells."""
    best = int(np.argmax(values) if maximize else np.argmin(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    sign = -1.0 if maximize else 1.0
    x_best, f_best = float(grid[best]), float(values[best])
    if hi > lo:
        res = optimize.minimize_scalar(lambda x: sign * func(x), bounds=(lo, hi), method="bounded",
                                       options={"xatol": tol})
        f = sign * float(res.fun)
        if (f > f_best) if maximize else (f < f_best):
            x_best, f_best = float(res.x), f
    return x_best, f_best


class FrozenStudy:
    """Per-replicate base designs and test points, reused for every ``delta``."""

    def __init__(self, spec: SchemeSpec, d: int, n: int, test_points: int, reps: int, seed: int):
        self.spec, self.d = spec, d
        base = spec.with_delta(1.0) if spec.id.on_cube else spec.with_delta(min(1.0, math.sqrt(d)))
        self.scale = base.delta
        self.bases = [generate(base, d, n, replicate_seed(seed, k)).points for k in range(reps)]
        self.chunks = [frozen_test_points(d, test_points, seed, k) for k in range(reps)]
        self.seed = seed

    def distances(self, delta: float) -> list[np.ndarray]:
        f = delta / self.scale
        return [min_sq_distances(f * b, c) for b, c in zip(self.bases, self.chunks)]


def optimize_delta(spec: SchemeSpec, d: int, n: int, r: float, method: str = "approx2",
                   test_points: int = 20_000, design_replications: int = 10, seed: int = 0,
                   step: float = DELTA_STEP):
    """``delta`` maximizing coverage at radius ``r``; returns ``(delta_star, coverage)``.

    Grid search with spacing ``step`` over the scheme's admissible range,
    then golden-section refinement around the best grid point.
    """
    grid = delta_grid(spec, d, step)
    if method in ("approx1", "approx2"):
        func = coverage_approx2 if method == "approx2" else coverage_approx1
        objective = lambda x: func(d, n, r, float(x))  # noqa: E731
    elif method == "mc":
        spec.check_dim(d)
        m = _replications(spec, design_replications)
        study = FrozenStudy(spec, d, n, test_points, m, seed)
        objective = lambda x: _summarize(study.distances(float(x)), r, seed).value  # noqa: E731
    else:
        raise ValueError(f"unknown method {method!r}")
    values = np.array([objective(x) for x in grid])
    return golden_refine(objective, grid, values, maximize=True)


def sweep_delta(spec: SchemeSpec, d: int, n: int, r: float, deltas, method: str = "mc",
                test_points: int = DEFAULT_TEST_POINTS, design_replications: int = DEFAULT_REPLICATIONS,
                seed: int = 0) -> list[SweepRow]:
    """Coverage at radius ``r`` for each ``delta`` (common random numbers across ``delta``)."""
    rows = []
    if method == "mc":
        spec.check_dim(d)
        m = _replications(spec, design_replications)
        study = FrozenStudy(spec, d, n, test_points, m, seed)
        for x in deltas:
            est = _summarize(study.distances(float(x)), r, seed)
            rows.append(SweepRow(float(x), est.value, est.std_err, "mc", d, n, r, spec.id.value, seed))
    elif method in ("approx1", "approx2"):
        func = coverage_approx2 if method == "approx2" else coverage_approx1
        for x in deltas:
            rows.append(SweepRow(float(x), func(d, n, r, float(x)), 0.0, method, d, n, r, spec.id.value, None))
    else:
        raise ValueError(f"unknown method {method!r}")
    return rows
