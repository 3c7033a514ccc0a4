"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured numbers
before asserting, so ``pytest -s tests/test_acceptance.py`` (or the captured
output in a ``-v`` run) gives a per-criterion summary. Run this file directly
for the same output: ``python3 tests/test_acceptance.py``.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from hypercover import geometry
from hypercover.ball_cover import (LocalCoverQuery, PointKind, approx_adjusted, mc_curve, moments,
                                   vertex_relation_check)
from hypercover.cube_cover import (CubeCoverQuery, cube_cover_curve, expected_coverage_closed_form, ik_integral,
                                   ik_quadrature)
from hypercover.designs import SchemeSpec
from hypercover.quantize import minimize_over_delta, quantization_mc, quantization_mc_averaged
from hypercover.reference import BALL_VOLUME_100, TABLE1
from hypercover.union_cover import (FrozenStudy, _summarize, coverage_approx1, coverage_approx2,
                                    coverage_mc_averaged)

pytestmark = pytest.mark.slow


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return emit


def _cli(argv, threads=None):
    env = dict(os.environ)
    if threads is not None:
        env["HYPERCOVER_THREADS"] = str(threads)
    return subprocess.run([sys.executable, "-m", "hypercover.cli", *argv], env=env, capture_output=True,
                          check=True)


def test_criterion_01_table7(report):
    start = time.perf_counter()
    out = _cli(["table", "--id", "7"]).stdout.decode()
    elapsed = time.perf_counter() - start
    lines = out.strip().splitlines()[1:]
    misses = []
    for line in lines:
        f = line.split(",")
        d, printed, value = int(f[2]), float(f[4]), float(f[6])
        if abs(value - printed) > 0.001:
            misses.append(f"d={d}: {value:.5f} vs {printed}")
    ok = len(lines) == 18 and not misses and elapsed < 1.0
    report(1, ok, f"{18 - len(misses)}/18 within 0.001, {elapsed:.2f}s; misses: {misses or 'none'}")


def test_criterion_02_ball_volume(report):
    v = geometry.unit_ball_volume(100)
    rel = abs(v / BALL_VOLUME_100 - 1)
    report(2, rel <= 0.005, f"V_100 = {v:.6e}, relative error {rel:.2e}")


def test_criterion_03_table1_scheme1(report):
    row = TABLE1.rows[0]
    details, ok = [], True
    for n in TABLE1.ns:
        r, delta = TABLE1.cell(row, n)
        est = coverage_mc_averaged(SchemeSpec("s1", delta), 10, n, r, 100_000, 50, seed=0)
        ok &= abs(est.value - 0.90) <= 0.01
        details.append(f"n={n}: {est.value:.4f}+-{est.std_err:.4f}")
    report(3, ok, "; ".join(details))


def test_criterion_04_delta_effect(report):
    good = coverage_mc_averaged(SchemeSpec("s1", 0.46), 50, 1024, 3.970, 20_000, 10, seed=0)
    plain = coverage_mc_averaged(SchemeSpec("s1", 1.0), 50, 1024, 3.970, 20_000, 10, seed=0)
    ok = good.value >= 0.89 and plain.value <= 0.80
    report(4, ok, f"delta=0.46: {good.value:.4f}, delta=1: {plain.value:.4f}")


def test_criterion_05_union_approximation(report):
    worst, points = 0.0, 0
    for d, n, delta in [(20, 128, 0.55), (20, 512, 0.68), (50, 128, 0.38), (50, 512, 0.45)]:
        dists = FrozenStudy(SchemeSpec("s1", delta), d, n, 20_000, 20, 0).distances(delta)
        pooled = np.sort(np.concatenate(dists))
        for q in np.linspace(0.45, 0.97, 14):
            r = float(math.sqrt(pooled[int(q * len(pooled))]))
            est = _summarize(dists, r, 0)
            if 0.5 <= est.value <= 0.95:
                worst = max(worst, abs(coverage_approx2(d, n, r, delta) - est.value))
                points += 1
    grid = [(20, 128, 0.55, 2.46), (20, 512, 0.68, 2.29), (50, 128, 0.38, 4.13), (50, 512, 0.45, 4.02),
            (20, 512, 1.0, 2.40), (50, 128, 1.0, 4.60)]
    wins = 0
    for d, n, delta, r in grid:
        est = coverage_mc_averaged(SchemeSpec("s1", delta), d, n, r, 20_000, 20, seed=1)
        wins += abs(coverage_approx2(d, n, r, delta) - est.value) <= abs(coverage_approx1(d, n, r, delta) - est.value)
    ok = points > 0 and worst <= 0.015 and wins >= 5
    report(5, ok, f"max |approx2 - MC| = {worst:.4f} over {points} band points; approx2 closer at {wins}/6")


def test_criterion_06_single_ball(report):
    d, checked, bad, worst = 50, 0, [], 0.0
    for z2 in (0.0, d / 4):
        z = np.full(d, math.sqrt(z2 / d))
        m = moments(LocalCoverQuery(d, z2, 0.0))
        radii = [math.sqrt(m.mu + t * math.sqrt(m.sigma_sq)) for t in np.linspace(-3.2, 1.3, 12)]
        for r, est in zip(radii, mc_curve(z, radii, 10_000_000, seed=1)):
            if not 0.001 <= est.value <= 0.9:
                continue
            gap = abs(approx_adjusted(LocalCoverQuery(d, z2, r, PointKind.DIAGONAL)) - est.value)
            worst = max(worst, gap)
            checked += 1
            if gap > max(0.005, 3 * est.std_err):
                bad.append(f"|Z|^2={z2}, r={r:.3f}")
    report(6, checked > 0 and not bad, f"{checked} radii, max gap {worst:.5f}, violations: {bad or 'none'}")


def test_criterion_07_cube_closed_form(report):
    mc_bad, mc_points = [], 0
    for d in (5, 10):
        for n in (50, 128):
            for delta in (0.4, 0.7, 1.0):
                radii = (0.6, 0.75)
                curve = cube_cover_curve(d, n, radii, delta, 50_000, 20, seed=2)
                for r, est in zip(radii, curve):
                    exact = expected_coverage_closed_form(CubeCoverQuery(d, n, r, delta))
                    mc_points += 1
                    if abs(exact - est.value) > 3 * est.std_err:
                        mc_bad.append(f"d={d},n={n},delta={delta},r={r}: {exact:.4f} vs {est.value:.4f}")
    # one (r, delta) per branch: r <= delta with r + delta < 1, r <= delta, delta < r < delta + 1, r >= delta + 1
    branch_cases = [(0.2, 0.3), (0.5, 0.8), (0.9, 0.6), (1.7, 0.5)]
    quad_gap = max(abs(ik_integral(k, r, dl) - ik_quadrature(k, r, dl))
                   for r, dl in branch_cases for k in (1, 2, 5, 17))
    stable = all(0.0 <= expected_coverage_closed_form(CubeCoverQuery(10, 1024, r, 0.7)) <= 1.0
                 for r in (0.3, 0.5, 0.7, 0.9))
    ok = not mc_bad and quad_gap <= 1e-10 and stable
    report(7, ok, f"MC grid {mc_points - len(mc_bad)}/{mc_points} within 3se; I_k vs quadrature {quad_gap:.1e}; "
                  f"n=1024 stable: {stable}; misses: {mc_bad or 'none'}")


def test_criterion_08_quantization(report):
    delta, value = minimize_over_delta(SchemeSpec("s1", 1.0), 10, 64, 20_000, 50, seed=0)
    s7 = quantization_mc_averaged(SchemeSpec("s7", 1.0), 50, 1024, 20_000, 1, seed=0)
    s7_norm = 1024 ** (2 / 50) * s7.value
    ok = abs(value - 4.153) <= 0.01 * 4.153 and abs(delta - 0.68) <= 0.04 and abs(s7_norm - 21.711) <= 0.01 * 21.711
    report(8, ok, f"S1 d=10 n=64: {value:.4f} at delta={delta:.3f}; S7 d=50 n=1024: {s7_norm:.4f}")


def test_criterion_09_small_exact_cases(report):
    one_d = coverage_mc_averaged(SchemeSpec("s1", 1.0), 1, 1, 0.5, 2_000, 500, seed=3)
    ok1 = abs(one_d.value - 0.4375) <= 3 * one_d.std_err
    origin = quantization_mc(np.zeros((1, 10)), 100_000, seed=3)
    ok2 = abs(origin.value - 10 / 3) <= 3 * origin.std_err
    lhs, rhs = vertex_relation_check(10, 0.9, 1_000_000, seed=3)
    ok3 = abs(lhs.value - rhs.value) <= 3 * math.hypot(lhs.std_err, rhs.std_err)
    report(9, ok1 and ok2 and ok3, f"d=1 coverage {one_d.value:.4f}+-{one_d.std_err:.4f}; "
                                   f"E theta for {{0}} {origin.value:.4f} (d/3 = 3.3333); "
                                   f"vertex {lhs.value:.3e} vs {rhs.value:.3e}")


DETERMINISM_COMMANDS = [
    ["local-cover", "--dim", "10", "--z-norm", "0", "--r", "1.2", "--method", "mc", "--samples", "200000",
     "--seed", "7"],
    ["cover", "--d", "10", "--n", "64", "--delta", "0.7", "--r", "1.632", "--samples", "50000",
     "--replications", "4", "--seed", "5"],
    ["cover", "--d", "10", "--n", "64", "--delta", "0.7", "--target", "0.9", "--samples", "30000",
     "--replications", "3", "--format", "json"],
    ["cube-cover", "--d", "5", "--n", "50", "--r", "0.6", "--delta", "0.7", "--method", "mc", "--samples",
     "40000", "--replications", "4"],
    ["quantize", "--d", "10", "--n", "64", "--sweep-delta", "0.5:0.9:0.2", "--samples", "30000",
     "--replications", "3"],
]


def test_criterion_10_determinism(report):
    same = 0
    for argv in DETERMINISM_COMMANDS:
        outputs = {_cli(argv, threads).stdout for threads in (1, 4)}
        same += len(outputs) == 1
    report(10, same == len(DETERMINISM_COMMANDS),
           f"{same}/{len(DETERMINISM_COMMANDS)} commands byte-identical at 1 vs 4 threads")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s", "-p", "no:cacheprovider"]))
