import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from data_modals.pydantic_models.lab_modals import (
    CounterexampleRun,
    IdentityConfig,
    RegularitySweep,
    TailBoundConfig,
    TraceRegularityConfig,
)
from services.analysis_lab import (
    KATO_TIME,
    bookkeeping,
    closed_form,
    count_lambda4,
    identity_checks,
    kato_sample_profile,
    kato_sweep,
    lower_bound,
    operator_weights,
    optimality_run,
    predicted_exponent,
    rhs_indices,
    sina_exponential,
    tail_bound_spotcheck,
    tail_start,
    trace_regularity_r,
)
from services.analysis_lab import kato as kato_module
from services.analysis_lab import lambda4 as lambda4_module
from services.exceptions import ConstraintError, InputError
from services.linear_flow import navier_frequencies
from tasks.lab_tasks import kato_sample

SMALL_SWEEP = RegularitySweep(s_grid=[1.0, 2.0], ensemble=8, modes=256)


def test_lambda4_small_cube():
    result = count_lambda4(3)
    assert result.diagonal == 7
    assert result.max_multiplicity <= 3
    assert sum(size * count for size, count in result.histogram.items()) + result.diagonal == 49
    assert not result.wide_integers


@pytest.mark.slow
def test_lambda4_default_range():
    result = count_lambda4(200)
    assert result.passed
    assert result.diagonal == 401


def test_lambda4_wide_integers_agree(monkeypatch):
    narrow = count_lambda4(12)
    monkeypatch.setattr(lambda4_module, "INT64_FOURTH_POWER_LIMIT", 1)
    wide = count_lambda4(12)
    assert wide.wide_integers
    assert wide.histogram == narrow.histogram
    assert wide.max_multiplicity == narrow.max_multiplicity


def test_lambda4_rejects_tiny_range():
    with pytest.raises(InputError):
        count_lambda4(1)


def test_lower_bound_first_term():
    sine_w, cosine_w = operator_weights(0, 8)
    assert lower_bound(1, 3.4, sine_w, cosine_w) == pytest.approx(2.0 / np.pi ** 2)


def test_counterexample_ratio_grows():
    result = optimality_run(CounterexampleRun())
    assert not result.is_control
    assert result.spatial_modes == 512
    assert result.growth >= 1.2
    assert result.monotone
    assert result.passed


def test_control_ratio_levels_off():
    result = optimality_run(CounterexampleRun(alpha=0.8, beta=4.0))
    assert result.is_control
    assert result.last_doubling_growth <= 1.05
    assert all(row.bound_holds for row in result.rows)


def test_threshold_control_ratio_is_bounded():
    # alpha = 3/4 sits exactly on the order-0 threshold
    result = optimality_run(CounterexampleRun(alpha=0.75, beta=3.6))
    assert result.is_control
    assert [row.n for row in result.rows][-2:] == [32, 64]
    assert result.last_doubling_growth <= 1.05
    assert all(row.bound_holds for row in result.rows)


@pytest.mark.parametrize("beta, constraint", [(2.0, "beta>(1+8alpha)/2"), (3.6, "beta<(7-2i)/2")])
def test_counterexample_beta_interval(beta, constraint):
    with pytest.raises(ConstraintError) as info:
        CounterexampleRun(beta=beta)
    assert info.value.constraint == constraint


def test_identity_checks_small_grid():
    cfg = IdentityConfig(a_grid=[1.0], x_grid=[0.9, np.pi / 2], K_grid=[250, 500, 1000])
    result = identity_checks(cfg)
    assert result.monotone
    assert result.sina_residual < 1e-12
    assert result.sawtooth_gap < 1e-6
    assert result.spot_residual < 1e-3
    assert result.passed
    assert [row.K for row in result.rows] == [250, 500, 1000]


def test_closed_form_small_a_is_the_sawtooth():
    x = np.array([0.5, 1.0, 2.0])
    assert_allclose(closed_form(1e-8, x), (np.pi - x) / 2.0, atol=1e-10)


@pytest.mark.parametrize("a", [0.05, 1.0, 3.3, 5.0])
def test_sina_exponential(a):
    expected = np.sin(np.exp(1j * np.pi / 4) * a)
    assert abs(sina_exponential(a) - expected) <= 1e-13 * max(1.0, abs(expected))


def test_tail_start():
    assert tail_start(16.0) == 3
    assert tail_start(10.0) == 2
    assert tail_start(10000.0) == 11


def test_tail_spotcheck_small_grid():
    cfg = TailBoundConfig(x_grid=[0.25, 0.5], lam_grid=[16.0, 256.0], terms=200_000)
    result = tail_bound_spotcheck(cfg)
    assert len(result.points) == 4
    assert not any(point.flagged for point in result.points)
    assert math.isfinite(result.constant)
    assert result.slope_limit == pytest.approx(-0.025 + 0.2)


def test_rhs_indices():
    assert rhs_indices(0.5, 0.1) == pytest.approx((0.3, 1.3))
    assert rhs_indices(2.0, 0.1) == pytest.approx((4.9, 5.9))


def test_bookkeeping_threshold():
    rows = bookkeeping([1.0, 1.4, 1.5, 3.0])
    assert [row.above_threshold for row in rows] == [False, False, True, True]
    assert all(row.third == row.above_threshold for row in rows)
    assert all(row.second for row in rows)


def test_trace_regularity_small_grid():
    result = trace_regularity_r(TraceRegularityConfig(s_grid=[0.5, 1.0, 1.5], N=64))
    assert len(result.rows) == 12
    assert {row.trace for row in result.rows} == {"r1", "r2", "r3", "r4"}
    assert all(math.isfinite(row.constant) for row in result.rows)
    assert len(result.bookkeeping) == 3 + 90
    assert result.passed


@pytest.mark.parametrize("order", [0, 1, 2])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_single_mode_kato_profile(order, k):
    q = np.zeros(3, dtype=complex)
    q[k - 1] = 0.3 + 0.7j
    omega = navier_frequencies(3)
    profile = kato_sample_profile(q, order)
    expected = -2.0 * q[k - 1] * np.exp(1j * omega[k - 1] * KATO_TIME)
    assert profile[k - 1] == pytest.approx(expected, rel=1e-10)


def test_predicted_exponent():
    assert predicted_exponent(1.0, 0) == pytest.approx(1.0)
    assert predicted_exponent(2.0, 2) == pytest.approx(0.75)


def test_kato_sweep_is_within_tolerance_and_deterministic(monkeypatch):
    monkeypatch.setenv("BIHNS_THREADS", "2")
    first = kato_sweep(SMALL_SWEEP, seed=11)
    second = kato_sweep(SMALL_SWEEP, seed=11)
    assert first.passed
    assert len(first.rows) == 2 * 8 * 3
    assert [row.exponent for row in first.rows] == [row.exponent for row in second.rows]
    for row in first.summary:
        assert row.deviation == pytest.approx(0.025, abs=0.05)


def test_kato_profile_exponent_is_the_sample_regularity():
    result = kato_sweep(SMALL_SWEEP, seed=11)
    for row in result.rows:
        assert row.spatial_exponent == pytest.approx(row.s + SMALL_SWEEP.eps, abs=1e-3)
        assert row.implied == pytest.approx(predicted_exponent(row.spatial_exponent, row.order))
    for row in result.summary:
        assert row.gap <= 0.02


def test_kato_sweep_fails_without_a_driven_profile(monkeypatch):
    def silent(h, omega, times):
        return np.zeros((np.size(times), np.size(omega)), dtype=complex)

    monkeypatch.setattr(kato_module, "convolve_series", silent)
    result = kato_sweep(RegularitySweep(s_grid=[1.0], ensemble=8, modes=64), seed=3)
    assert all(row.flagged for row in result.rows)
    assert not any(row.within for row in result.summary)
    assert not result.passed


def test_kato_sweep_sees_a_smoothed_response(monkeypatch):
    convolve = kato_module.convolve_series

    def smoothed(h, omega, times):
        # one extra power of 1/k on every driven mode
        return convolve(h, omega, times) * np.asarray(omega) ** -0.25

    monkeypatch.setattr(kato_module, "convolve_series", smoothed)
    result = kato_sweep(SMALL_SWEEP, seed=11)
    for row in result.summary:
        assert row.gap == pytest.approx(0.25, abs=0.02)
        assert not row.within
    assert not result.passed


def test_kato_sample_task_runs_one_cell():
    outcome = kato_sample.apply(args=(SMALL_SWEEP.model_dump_json(), 1, 3, 5)).get()
    assert outcome["status"] == "success"
    assert [row["order"] for row in outcome["rows"]] == [0, 1, 2]
    assert all(row["s"] == 2.0 for row in outcome["rows"])


def test_kato_sample_task_reports_bad_index():
    outcome = kato_sample.apply(args=(SMALL_SWEEP.model_dump_json(), 5, 0)).get()
    assert outcome["status"] == "error"
