"""Cost-model tests: deadband, filters, integrals, penalty, aggregation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfes import (
    J_FALL,
    CostBreakdown,
    PenaltyParams,
    TrajectoryLog,
    cost_real,
    cost_sim_averaged,
    mean_filter,
    penalty,
    smooth_deadband,
    stability_integral,
)


def make_traj(e_alpha, e_beta=None, dt=0.01, fell=False):
    e_alpha = np.asarray(e_alpha, dtype=float)
    e_beta = e_alpha.copy() if e_beta is None else np.asarray(e_beta, dtype=float)
    return TrajectoryLog(
        dt=dt,
        e_p_alpha=e_alpha,
        e_p_beta=e_beta,
        tilt_alpha=e_alpha,
        tilt_beta=e_beta,
        fell=fell,
        fall_time=0.5 if fell else None,
    )


# ----------------------------------------------------------------------
# smooth deadband


def test_deadband_zero_at_origin_and_identity_at_zero_radius():
    assert smooth_deadband(0.0, 0.3) == 0.0
    assert smooth_deadband(1.234, 0.0) == 1.234


def test_deadband_suppresses_small_passes_large():
    r = 0.1
    small = smooth_deadband(0.05, r)
    large = smooth_deadband(5.0, r)
    assert abs(small) < 0.05 * 0.2  # tiny inside the band
    assert large == pytest.approx(5.0 - r, abs=1e-3)  # unit slope minus offset outside


def test_deadband_odd_function():
    v = np.linspace(-2, 2, 41)
    out = smooth_deadband(v, 0.25)
    assert np.allclose(out, -smooth_deadband(-v, 0.25))


def test_deadband_negative_radius_raises():
    with pytest.raises(ValueError):
        smooth_deadband(1.0, -0.1)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-50, 50),
    st.floats(-50, 50),
    st.floats(0.01, 5.0),
)
def test_deadband_monotone_nondecreasing(a, b, r):
    lo, hi = min(a, b), max(a, b)
    assert smooth_deadband(hi, r) >= smooth_deadband(lo, r) - 1e-12


# ----------------------------------------------------------------------
# mean filter


def test_mean_filter_first_sample_passthrough():
    out = mean_filter([3.0, 5.0, 7.0], window=3)
    assert out[0] == 3.0
    assert out[1] == pytest.approx(4.0)
    assert out[2] == pytest.approx(5.0)


def test_mean_filter_window_one_is_identity():
    x = np.array([1.0, -2.0, 0.5])
    assert np.array_equal(mean_filter(x, 1), x)


def test_mean_filter_constant_fixed_point():
    x = np.full(20, 2.5)
    assert np.allclose(mean_filter(x, 7), 2.5)


def test_mean_filter_matches_naive_sliding_mean():
    rng = np.random.default_rng(5)
    x = rng.normal(size=50)
    w = 6
    got = mean_filter(x, w)
    ref = np.array([x[max(0, i - w + 1) : i + 1].mean() for i in range(50)])
    assert np.allclose(got, ref)


def test_mean_filter_bad_window():
    with pytest.raises(ValueError):
        mean_filter([1.0], 0)


# ----------------------------------------------------------------------
# stability integral and penalty


def test_stability_integral_unit_series():
    # |1| integrated over 3 s at dt = 0.01 -> exactly 3.0
    series = np.ones(300)
    assert stability_integral(series, 0.01) == pytest.approx(3.0, abs=1e-12)


def test_stability_integral_rectangle_rule():
    series = np.array([1.0, -2.0, 0.5])
    assert stability_integral(series, 0.1) == pytest.approx(0.35, abs=1e-12)


def test_stability_integral_bad_dt():
    with pytest.raises(ValueError):
        stability_integral([1.0], 0.0)


def test_penalty_midpoint_at_threshold():
    """At ||x|| = lam * ||x_max|| the logistic sits exactly at s/2."""
    params = PenaltyParams(x_max=np.array([40.0, 12.0]), s=7.5, gamma=6.0, lam=0.75)
    corner = float(np.linalg.norm([40.0, 12.0]))
    x = np.array([0.75 * corner, 0.0])
    assert penalty(x, params) == pytest.approx(3.75, abs=1e-12)


def test_penalty_limits_and_monotonicity():
    params = PenaltyParams(x_max=np.array([10.0]), s=7.5)
    assert penalty(np.array([1e-6]), params) < 1e-6
    assert penalty(np.array([10.0]), params) > penalty(np.array([5.0]), params)
    # bounded by s even for absurd magnitudes, no overflow warnings
    big = penalty(np.array([1e6]), params)
    assert big <= 7.5 and big == pytest.approx(7.5, abs=1e-9)


def test_penalty_dimension_check():
    params = PenaltyParams(x_max=np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        penalty(np.array([1.0]), params)


def test_penalty_params_validation():
    with pytest.raises(ValueError):
        PenaltyParams(x_max=np.array([-1.0]))
    with pytest.raises(ValueError):
        PenaltyParams(x_max=np.array([1.0]), gamma=0.0)
    with pytest.raises(ValueError):
        PenaltyParams(x_max=np.array([1.0]), lam=1.5)


# ----------------------------------------------------------------------
# per-rollout and averaged costs


def test_cost_real_sums_stability_and_penalty():
    params = PenaltyParams(x_max=np.array([10.0, 10.0]))
    traj = make_traj(np.ones(100), np.zeros(100), dt=0.01)
    x = np.array([1.0, 1.0])
    cb = cost_real(traj, x, params)
    assert cb.total == pytest.approx(cb.stability + cb.penalty, abs=1e-12)
    assert cb.stability == pytest.approx(1.0)
    assert not cb.fell


def test_cost_real_fall_overrides_total():
    params = PenaltyParams(x_max=np.array([10.0]))
    cb = cost_real(make_traj(np.ones(10), fell=True), np.array([1.0]), params)
    assert cb.total == J_FALL
    assert cb.fell


def test_cost_real_plane_selection():
    params = PenaltyParams(x_max=np.array([10.0]))
    traj = make_traj(np.ones(100), np.zeros(100), dt=0.01)
    x = np.array([0.1])
    a = cost_real(traj, x, params, plane="alpha").stability
    b = cost_real(traj, x, params, plane="beta").stability
    s = cost_real(traj, x, params, plane="summed").stability
    assert a == pytest.approx(1.0) and b == pytest.approx(0.0)
    assert s == pytest.approx(a + b)
    with pytest.raises(ValueError):
        cost_real(traj, x, params, plane="gamma")


def test_cost_sim_averaged_single_rollout_degenerates_to_cost_real():
    params = PenaltyParams(x_max=np.array([10.0]))
    traj = make_traj(np.random.default_rng(0).normal(size=64))
    x = np.array([2.0])
    single = cost_real(traj, x, params)
    avg = cost_sim_averaged([traj], x, params)
    assert avg.total == pytest.approx(single.total, abs=1e-12)
    assert avg.stability == pytest.approx(single.stability, abs=1e-12)
    assert avg.fell == single.fell


def test_cost_sim_averaged_mixes_falls_into_mean():
    params = PenaltyParams(x_max=np.array([10.0]))
    x = np.array([0.1])
    ok = make_traj(np.zeros(10))
    bad = make_traj(np.zeros(10), fell=True)
    cb = cost_sim_averaged([ok, bad], x, params)
    pen = penalty(x, params)
    assert cb.fell
    assert cb.total == pytest.approx((pen + J_FALL) / 2.0, abs=1e-12)


def test_cost_sim_averaged_empty_raises():
    with pytest.raises(ValueError):
        cost_sim_averaged([], np.array([1.0]), PenaltyParams(x_max=np.array([2.0])))
