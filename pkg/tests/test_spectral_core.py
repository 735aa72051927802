import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from data_modals.pydantic_models.spectral_modals import TRACE_PERIOD, BoundaryTrace, FourierState, SobolevIndex
from services.exceptions import InputError
from services.spectral_core import (
    critical_exponent,
    odd_even_extend,
    reconstruct,
    series_boundary_values,
    sine_boundary_limits,
    sine_coefficients,
    sobolev_norm,
    trace_sobolev_norm,
    uniform_grid,
)


def test_sine_coefficients_of_trig_polynomial_are_exact():
    state = sine_coefficients(lambda x: np.sin(np.pi * x) + 0.5 * np.sin(3 * np.pi * x), 8)
    expected = np.zeros(8)
    expected[0], expected[2] = 1.0, 0.5
    assert state.basis == "sine"
    assert_allclose(state.q, expected, atol=1e-12)


def test_sine_coefficients_rejects_non_finite_samples():
    with pytest.raises(InputError):
        sine_coefficients(lambda x: np.full_like(x, np.nan), 4)


def test_odd_even_extend_halves_the_sine_coefficients():
    phi = lambda x: x * (1 - x) + 0.2
    phi_o, phi_e = odd_even_extend(phi, 32)
    assert_allclose(2 * phi_o.q, sine_coefficients(phi, 32).q, atol=1e-14)
    # phi_o + phi_e is the zero extension of phi to (-1,1), so p0 carries half the mean
    # p0 = (1/2) int_0^1 phi = (1/2)(1/6 + 0.2)
    assert phi_e.p0.real == pytest.approx(0.5 * (1 / 6 + 0.2), rel=1e-4)
    assert phi_e.basis == "cosine"


def test_reconstruct_sine_state():
    state = FourierState.sine([1.0, 0.0, 0.5])
    assert_allclose(reconstruct(state, [0.5]), [0.5], atol=1e-14)
    with pytest.raises(InputError):
        reconstruct(state, [1.5])


def test_sobolev_norm_weights():
    state = FourierState.sine([1.0])
    assert sobolev_norm(state, 0.0) == pytest.approx(1.0)
    assert sobolev_norm(state, 1.0) == pytest.approx(np.sqrt(1 + np.pi ** 2))
    with pytest.raises(ValidationError):
        SobolevIndex(s=5.0)


def test_l2_norm_of_sine_state_is_the_l2_norm_on_the_interval():
    state = FourierState.sine([2.0, 0.0, 1.0])
    # int_0^1 |2 sin(pi x) + sin(3 pi x)|^2 = (4 + 1)/2
    assert state.l2_norm() == pytest.approx(np.sqrt(2.5))


def test_fourier_state_rejects_mixed_parts_in_a_sine_state():
    with pytest.raises(ValidationError):
        FourierState(basis="sine", q=[1.0], p=[1.0])


def test_trace_sobolev_norm():
    h = BoundaryTrace.from_series([2], [3.0])
    assert trace_sobolev_norm(h, 1.0) == pytest.approx(3.0 * np.sqrt(5.0))
    with pytest.raises(InputError):
        trace_sobolev_norm(BoundaryTrace(sample_times=[0.0, 1.0], sample_values=[0.0, 1.0]), 0.5)


def test_critical_exponent_of_pure_power_law():
    n = np.arange(1, 401)
    fit = critical_exponent(n, 1.0 / n)
    assert fit["exponent"] == pytest.approx(0.5, abs=1e-9)
    assert fit["r2"] == pytest.approx(1.0)
    assert not fit["flagged"]


def test_critical_exponent_of_empty_sequence_is_trivial():
    fit = critical_exponent(np.array([1]), np.array([0.0]))
    assert fit["trivial"]
    assert fit["exponent"] == float("inf")


def test_sine_boundary_limits_of_linear_profile():
    # 1 - x has q_k = 2/(k pi): u(0) = 1, u(1) = 0 and no curvature
    k = np.arange(1, 65)
    limits = sine_boundary_limits(2.0 / (k * np.pi))
    assert_allclose(limits.u0, [1.0], atol=1e-10)
    assert_allclose(limits.u1, [0.0], atol=1e-10)
    assert_allclose(limits.uxx0, [0.0], atol=1e-8)
    assert_allclose(limits.uxx1, [0.0], atol=1e-8)


def test_series_boundary_values():
    p = np.zeros(8)
    p[:2] = [1.0, 0.5]
    q = np.zeros(8)
    q[0] = 1.0
    values = series_boundary_values(FourierState.mixed(q, p, p0=0.25))
    assert values.u0 == pytest.approx(1.75)
    assert values.u1 == pytest.approx(-0.25)
    assert values.ux0 == pytest.approx(np.pi)
    assert values.ux1 == pytest.approx(-np.pi)
    assert values.converged


def test_uniform_grid_includes_endpoints():
    grid = uniform_grid(4)
    assert_allclose(grid, [0.0, 0.25, 0.5, 0.75, 1.0])


def test_from_samples_recovers_lattice_series():
    times = np.linspace(0.0, TRACE_PERIOD, 200, endpoint=False)
    values = 0.5 + 2.0 * np.exp(3j * np.pi ** 4 * times)
    h = BoundaryTrace.from_samples(times, values, max_n=4)
    assert_allclose(h.coeffs, [0.5, 0, 0, 2.0, 0], atol=1e-10)
    assert h.has_samples


def test_trace_shift_and_difference():
    h = BoundaryTrace.from_series([0, 1], [1.0, 2.0])
    shifted = h.shifted(1.0)
    assert_allclose(shifted.evaluate(0.0), 2.0)
    zero = h - h
    assert zero.is_zero()


@pytest.mark.parametrize(
    "state",
    [
        FourierState.sine(np.arange(1, 17) ** -1.5 * (1 + 0.5j)),
        FourierState.cosine(np.arange(1, 17) ** -2.0, p0=0.4 - 0.1j),
    ],
)
def test_l2_norm_agrees_with_the_grid_integral(state):
    grid = uniform_grid(256)
    on_grid = np.sqrt(np.trapezoid(np.abs(reconstruct(state, grid)) ** 2, grid))
    assert on_grid == pytest.approx(state.l2_norm(), rel=1e-12)


def test_sine_transform_inverts_reconstruct():
    rng = np.random.default_rng(5)
    q = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    values = reconstruct(FourierState.sine(q), uniform_grid(64))
    assert_allclose(sine_coefficients(values, 16).q, q, atol=1e-12)
