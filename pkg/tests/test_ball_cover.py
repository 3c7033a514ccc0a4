import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypercover.ball_cover import (LocalCoverQuery, PointKind, approx_adjusted, approx_normal, approx_petrov,
                                   center_for, cf_oracle, coordinate_cf, mc_curve, mc_oracle, moments,
                                   rescale_query, threshold_radius, vertex_relation_check)
from hypercover.rvlib import ShiftedSquareDist, shifted_square_moments
from hypercover.special import std_normal_cdf


def q(d, z2, r, kind=PointKind.TYPICAL):
    return LocalCoverQuery(d, z2, r, kind)


def test_query_validation():
    with pytest.raises(ValueError):
        q(0, 0.0, 1.0)
    with pytest.raises(ValueError):
        q(3, -1.0, 1.0)
    with pytest.raises(ValueError):
        q(3, 0.0, math.inf)


def test_rescale_query():
    base = rescale_query(4, 0.3, 1.1, 1.0)
    assert (base.z_norm_sq, base.r) == (0.3, 1.1)
    assert rescale_query(4, 0.0, 1.0, 0.5).r == 2.0
    twice = rescale_query(4, 0.3 / 0.8 ** 2, 1.1 / 0.8, 0.5)
    once = rescale_query(4, 0.3, 1.1, 0.4)
    assert twice.r == pytest.approx(once.r, rel=1e-14)
    assert twice.z_norm_sq == pytest.approx(once.z_norm_sq, rel=1e-14)
    with pytest.raises(ValueError):
        rescale_query(4, 0.3, 1.1, 0.0)


def test_moments_examples():
    assert moments(q(10, 0.0, 1.0)).mu == pytest.approx(10 / 3)
    m = moments(q(10, 2.5, 1.0))
    assert m.mu == pytest.approx(5.833333333333333)
    assert m.sigma_sq == pytest.approx(4.222222222222222)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=12))
def test_moments_match_coordinate_sum(z):
    z = np.array(z)
    per = [shifted_square_moments(ShiftedSquareDist(float(v))) for v in z]
    m = moments(q(len(z), float(z @ z), 1.0))
    assert m.mu == pytest.approx(sum(p[0] for p in per), rel=1e-12, abs=1e-12)
    assert m.sigma_sq == pytest.approx(sum(p[1] for p in per), rel=1e-12)
    assert m.mu3 == pytest.approx(sum(p[2] for p in per), rel=1e-12, abs=1e-12)


def test_approx_normal_examples():
    d = 10
    assert approx_normal(q(d, 0.0, math.sqrt(d / 3))) == pytest.approx(0.5, abs=1e-15)
    # at r = 0 the standardized value is -(d/3)/sqrt(4d/45) = -sqrt(5d)/2
    assert approx_normal(q(d, 0.0, 0.0)) == pytest.approx(float(std_normal_cdf(-math.sqrt(50) / 2)), rel=1e-14)
    assert approx_normal(q(d, 0.0, 0.0)) == pytest.approx(2.035e-4, rel=1e-3)


@given(st.integers(1, 200), st.floats(0, 50), st.floats(0, 20), st.floats(0, 20))
def test_approx_normal_monotone(d, z2, r1, r2):
    lo, hi = sorted((r1, r2))
    assert approx_normal(q(d, z2, hi)) >= approx_normal(q(d, z2, lo))


@given(st.integers(1, 200), st.floats(0, 50), st.sampled_from([-1.0, 1.0]), st.sampled_from(list(PointKind)))
def test_all_approximations_coincide_at_unit_t(d, z2, t, kind):
    m = moments(q(d, z2, 0.0))
    r2 = m.mu + t * math.sqrt(m.sigma_sq)
    if r2 < 0:
        return
    query = q(d, z2, math.sqrt(r2), kind)
    base = approx_normal(query)
    # (1 - t^2) vanishes up to the rounding in r = sqrt(r2)
    assert approx_petrov(query) == pytest.approx(base, abs=1e-12)
    assert approx_adjusted(query) == pytest.approx(base, abs=1e-12)


def test_petrov_correction_negative_in_left_tail():
    d, z2 = 30, 0.0
    m = moments(q(d, z2, 0.0))
    r = math.sqrt(m.mu - 3.0 * math.sqrt(m.sigma_sq))
    assert approx_petrov(q(d, z2, r)) < approx_normal(q(d, z2, r))


def test_adjusted_multiplier_tends_to_one():
    for kind in PointKind:
        assert kind.multiplier(10 ** 9) == pytest.approx(1.0, abs=1e-8)
    assert PointKind.DIAGONAL.multiplier(10) == 1.3
    assert PointKind.TYPICAL.multiplier(10) == 1.4


def test_threshold_radius_examples():
    assert threshold_radius(10, 0.0, 0.0) == pytest.approx(math.sqrt(10 / 3))
    assert threshold_radius(10, 0.0, 2.0) == pytest.approx(math.sqrt(10 / 3 - 4 * math.sqrt(10 / 45)))
    assert threshold_radius(10, 0.0, 2.0) == pytest.approx(1.2032, abs=1e-4)
    with pytest.raises(ValueError, match="beta must be <="):
        threshold_radius(10, 0.0, 4.0)


@given(st.integers(1, 300), st.floats(0, 100), st.floats(-5, 5))
def test_threshold_radius_inverts_normal_approx(d, z2, beta):
    spread = math.sqrt(z2 / 3 + d / 45)
    if z2 + d / 3 - 2 * beta * spread <= 0.05:
        return
    r = threshold_radius(d, z2, beta)
    assert approx_normal(q(d, z2, r)) == pytest.approx(float(std_normal_cdf(-beta)), rel=1e-9, abs=1e-12)


def test_center_for():
    diag = center_for(q(10, 2.5, 1.0, PointKind.DIAGONAL))
    assert np.allclose(diag, 0.5)
    typ = center_for(q(10, 2.5, 1.0), seed=3)
    assert float(typ @ typ) == pytest.approx(2.5)
    assert np.array_equal(typ, center_for(q(10, 2.5, 1.0), seed=3))


def test_mc_oracle_trivial_cases():
    z = np.full(5, 0.2)
    assert mc_oracle(q(5, 0.2, math.sqrt(0.2) + math.sqrt(5)), 1000, 1, z).value == 1.0
    assert mc_oracle(q(5, 0.2, 0.0), 1000, 1, z).value == 0.0
    est = mc_oracle(q(1, 0.0, 0.5), 100_000, 2, np.zeros(1))
    assert abs(est.value - 0.5) <= 3 * est.std_err
    assert est.std_err == pytest.approx(math.sqrt(est.value * (1 - est.value) / 100_000))
    with pytest.raises(ValueError):
        mc_oracle(q(5, 0.0, 1.0), 10, 1, np.zeros(4))


def test_mc_curve_matches_single_calls():
    z = np.zeros(6)
    curve = mc_curve(z, [1.5, 0.9, 1.2], 30_000, 7)
    for r, est in zip([1.5, 0.9, 1.2], curve):
        assert est.value == mc_curve(z, [r], 30_000, 7)[0].value
    assert curve[1].value <= curve[2].value <= curve[0].value


def test_coordinate_cf_against_quadrature():
    from scipy import integrate

    for z in (0.0, 0.4, 1.7):
        for s in (0.3, 2.0, 11.0):
            re = integrate.quad(lambda u: math.cos(s * (u - z) ** 2), -1, 1, limit=200)[0] / 2
            im = integrate.quad(lambda u: math.sin(s * (u - z) ** 2), -1, 1, limit=200)[0] / 2
            assert complex(coordinate_cf(z, s)) == pytest.approx(complex(re, im), abs=1e-12)


def test_cf_oracle_exact_low_dimensional_cases():
    assert cf_oracle([0.0], 0.5) == pytest.approx(0.5, abs=1e-7)
    assert cf_oracle([0.0, 0.0], 1.0) == pytest.approx(math.pi / 4, abs=1e-7)
    # quarter disk at a vertex
    assert cf_oracle([1.0, 1.0], 1.0) == pytest.approx(math.pi / 16, abs=1e-7)
    assert cf_oracle([0.3, -0.2, 0.9], 0.0) == 0.0
    assert cf_oracle([0.3, -0.2, 0.9], 5.0) == 1.0


def test_cf_oracle_agrees_with_mc_d10():
    z = np.zeros(10)
    exact = cf_oracle(z, 1.2)
    est = mc_curve(z, [1.2], 2_000_000, 5)[0]
    assert abs(exact - est.value) <= 3 * est.std_err


def test_cf_oracle_off_center_agrees_with_mc():
    z = np.linspace(-0.9, 1.4, 8)
    exact = cf_oracle(z, 1.9)
    est = mc_curve(z, [1.9], 1_000_000, 6)[0]
    assert abs(exact - est.value) <= 3 * est.std_err


def test_cf_oracle_dimension_guard():
    with pytest.raises(NotImplementedError):
        cf_oracle(np.zeros(31), 1.0)


@pytest.mark.parametrize("d", [5, 10])
@pytest.mark.parametrize("delta", [0.5, 0.8])
def test_rescaling_identity_by_mc(d, delta):
    rng = np.random.default_rng(d)
    z_prime = rng.uniform(-delta, delta, d)
    r_prime = 0.9 * delta * math.sqrt(d / 3)
    small = mc_curve(z_prime, [r_prime], 200_000, 1, half_side=delta)[0]
    query = rescale_query(d, float(z_prime @ z_prime), r_prime, delta)
    unit = mc_curve(z_prime / delta, [query.r], 200_000, 2)[0]
    assert abs(small.value - unit.value) <= 3 * math.hypot(small.std_err, unit.std_err)


def test_vertex_relation():
    lhs, rhs = vertex_relation_check(10, 0.9, 400_000, 3)
    assert abs(lhs.value - rhs.value) <= 3 * math.hypot(lhs.std_err, rhs.std_err)
    lhs2, rhs2 = vertex_relation_check(2, 1.0, 400_000, 4)
    assert lhs2.value == pytest.approx(math.pi / 16, abs=4 * lhs2.std_err)
    assert rhs2.value == pytest.approx(math.pi / 16, abs=4 * rhs2.std_err)
    lhs1, rhs1 = vertex_relation_check(1, 0.5, 100_000, 1)
    assert abs(lhs1.value - 0.25) <= 4 * lhs1.std_err
    assert abs(rhs1.value - 0.25) <= 4 * rhs1.std_err
    with pytest.raises(ValueError):
        vertex_relation_check(3, 1.2, 100, 0)


def test_adjusted_close_to_cf_oracle_d20():
    z = np.zeros(20)
    m = moments(q(20, 0.0, 0.0))
    for t in (-2.5, -1.5, 0.0, 1.0):
        r = math.sqrt(m.mu + t * math.sqrt(m.sigma_sq))
        assert approx_adjusted(q(20, 0.0, r)) == pytest.approx(cf_oracle(z, r), abs=0.005)


def test_half_diagonal_adjusted_d10():
    query = q(10, 2.5, 1.6, PointKind.DIAGONAL)
    est = mc_oracle(query, 2_000_000, 9)
    assert abs(approx_adjusted(query) - est.value) <= max(0.005, 3 * est.std_err)


@pytest.mark.parametrize("d,z2", [(10, 0.0), (10, 2.5), (50, 0.0), (50, 12.5)])
def test_soft_tail_ordering(d, z2):
    # in the far left tail the normal approximation overshoots and the skewness term pulls it down
    z = center_for(q(d, z2, 0.0, PointKind.DIAGONAL))
    m = moments(q(d, z2, 0.0))
    t_floor = -m.mu / math.sqrt(m.sigma_sq)  # r = 0
    ts = np.linspace(max(-4.0, t_floor + 0.3), -2.0, 5)
    radii = np.sqrt(m.mu + ts * math.sqrt(m.sigma_sq))
    mc_vals = [e.value for e in mc_curve(z, radii, 1_000_000, 1)]
    ok = 0
    for r, v in zip(radii, mc_vals):
        query = q(d, z2, float(r), PointKind.DIAGONAL)
        ok += approx_normal(query) >= approx_petrov(query) >= v - 1e-4
    assert ok >= 4
