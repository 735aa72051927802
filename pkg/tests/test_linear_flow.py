import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import solve_ivp

from data_modals.pydantic_models.flow_modals import ForcingHistory
from data_modals.pydantic_models.spectral_modals import PI4, BoundaryTrace, FourierState
from services.exceptions import InputError, TimeRangeError
from services.linear_flow import (
    build_clamped_basis,
    clamped_root,
    convolve_series,
    duhamel,
    duhamel_history,
    navier_frequencies,
    phi_functions,
    propagate_dirichlet,
    propagate_navier,
    propagate_periodic,
)
from services.spectral_core import sobolev_norm


def test_propagate_navier_rotates_each_mode():
    state = FourierState.sine([1.0, 1.0])
    moved = propagate_navier(state, 0.01)
    assert_allclose(moved.q, np.exp(1j * navier_frequencies(2) * 0.01))
    assert moved.t == pytest.approx(0.01)
    assert moved.l2_norm() == pytest.approx(state.l2_norm())


def test_propagate_navier_needs_a_sine_state():
    with pytest.raises(InputError):
        propagate_navier(FourierState.cosine([1.0]), 0.1)


@pytest.mark.parametrize("z", [1e-5, 5e-4, 2e-3, 0.5j, -3.0 + 1.0j])
def test_phi1_matches_expm1(z):
    phi1, _ = phi_functions(np.array([z]))
    assert_allclose(phi1, np.expm1(z) / z, rtol=1e-12)


def test_phi2_small_argument_limit():
    _, phi2 = phi_functions(np.array([1e-6]))
    assert phi2[0] == pytest.approx(0.5, rel=1e-6)


def test_duhamel_history_of_constant_forcing_is_exact():
    omega = np.array([PI4])
    times = np.linspace(0.0, 0.01, 11)
    history = duhamel_history(omega, times, np.ones((11, 1)))
    expected = (np.exp(1j * PI4 * times) - 1.0) / (1j * PI4)
    assert_allclose(history[:, 0], expected, rtol=1e-12, atol=1e-15)


def test_duhamel_between_nodes_and_range_check():
    times = np.linspace(0.0, 0.01, 6)
    forcing = ForcingHistory(times=times, values=np.ones((6, 2)))
    state = duhamel(forcing, 0.005)
    omega = navier_frequencies(2)
    expected = (np.exp(1j * omega * 0.005) - 1.0) / (1j * omega)
    assert_allclose(state.q, expected, rtol=1e-10)
    with pytest.raises(TimeRangeError):
        duhamel(forcing, 0.02)


def test_convolve_series_closed_form_and_resonance():
    h = BoundaryTrace.from_series([1, 2], [1.0, 1.0])
    omega = navier_frequencies(1)  # pi^4: resonant with n = 1
    t = np.array([0.003])
    value = convolve_series(h, omega, t)[0, 0]
    nu = 2 * PI4
    expected = t[0] * np.exp(1j * PI4 * t[0]) + (np.exp(1j * nu * t[0]) - np.exp(1j * PI4 * t[0])) / (1j * (nu - PI4))
    assert value == pytest.approx(expected, rel=1e-10)


def test_clamped_roots():
    assert clamped_root(1) == pytest.approx(4.730040744862704, abs=1e-12)
    assert clamped_root(2) == pytest.approx(7.853204624095838, abs=1e-12)


def test_clamped_basis_is_orthonormal_and_clamped():
    basis = build_clamped_basis(6)
    assert_allclose(basis.gram(), np.eye(6), atol=1e-8)
    ends = np.array([0.0, 1.0])
    assert_allclose(basis.evaluate_modes(ends), 0.0, atol=1e-8)
    assert_allclose(basis.evaluate_modes(ends, derivative=1), 0.0, atol=1e-6)


def test_propagate_dirichlet_checks_the_basis_size():
    basis = build_clamped_basis(3)
    moved = propagate_dirichlet(np.ones(3), 0.001, basis)
    assert_allclose(np.abs(moved), 1.0)
    with pytest.raises(InputError):
        propagate_dirichlet(np.ones(4), 0.001, basis)


@pytest.mark.parametrize("s", [0.0, 1.0, 2.0])
def test_free_flow_is_an_isometry(s):
    rng = np.random.default_rng(2024)
    for _ in range(20):
        q = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        state = FourierState.sine(q / np.arange(1, 257) ** 3)
        moved = propagate_navier(state, rng.uniform(0.0, 1.0))
        assert sobolev_norm(moved, s) == pytest.approx(sobolev_norm(state, s), rel=1e-13)


def test_duhamel_history_of_linear_forcing_is_exact():
    omega = np.array([PI4, 16 * PI4])
    times = np.linspace(0.0, 0.01, 11)
    forcing = np.repeat(times[:, None], 2, axis=1)
    history = duhamel_history(omega, times, forcing)
    a = 1j * omega
    expected = (np.exp(np.outer(times, a)) - 1.0 - np.outer(times, a)) / a ** 2
    assert_allclose(history, expected, rtol=1e-10, atol=1e-15)


def test_duhamel_history_matches_an_ode_solver():
    rng = np.random.default_rng(11)
    omega = np.array([PI4, 4 * PI4])
    times = np.linspace(0.0, 0.01, 21)
    values = rng.standard_normal((21, 2)) + 1j * rng.standard_normal((21, 2))
    history = duhamel_history(omega, times, values)

    # u' = i omega u + f, integrated one linear piece at a time
    u = np.zeros(2, dtype=complex)
    reference = [u]
    for j in range(times.size - 1):
        t0, t1 = times[j], times[j + 1]
        f0, f1 = values[j], values[j + 1]

        def rhs(t, y, t0=t0, t1=t1, f0=f0, f1=f1):
            weight = (t - t0) / (t1 - t0)
            return 1j * omega * y + (1 - weight) * f0 + weight * f1

        sol = solve_ivp(rhs, (t0, t1), u, method="DOP853", rtol=1e-12, atol=1e-14)
        u = sol.y[:, -1]
        reference.append(u)
    assert_allclose(history, np.array(reference), atol=1e-8)


def test_clamped_basis_stays_orthonormal_at_32_modes():
    basis = build_clamped_basis(32)
    assert basis.gram_error <= 1e-8
    assert_allclose(basis.gram(), np.eye(32), atol=1e-8)


def test_propagate_periodic_rotates_both_parts():
    state = FourierState.mixed([1.0, 0.5], [0.25, 1.0], p0=0.3)
    moved = propagate_periodic(state, 0.002)
    phase = np.exp(1j * navier_frequencies(2) * 0.002)
    assert moved.p0 == state.p0
    assert_allclose(moved.q, state.q * phase)
    assert_allclose(moved.p, state.p * phase)
    assert moved.t == pytest.approx(0.002)
    assert moved.l2_norm() == pytest.approx(state.l2_norm())
