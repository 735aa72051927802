from typing import Literal

import numpy as np
from loguru import logger

from data_modals.pydantic_models.flow_modals import ClampedBasis, ForcingHistory
from data_modals.pydantic_models.spectral_modals import PI4, BoundaryTrace, FourierState
from services.exceptions import InputError, TimeRangeError

SMALL_PHASE = 1e-3

Flow = Literal["navier", "periodic", "dirichlet"]


def navier_frequencies(N: int) -> np.ndarray:
    """(k pi)^4 for k = 1..N."""
    return (np.pi * np.arange(1, N + 1)) ** 4


def propagate_navier(state: FourierState, t: float) -> FourierState:
    """Free flow of a sine state: q_k -> exp(i (k pi)^4 t) q_k."""
    if state.basis != "sine":
        raise InputError("the Navier group acts on sine states", {"basis": state.basis})
    phase = np.exp(1j * navier_frequencies(state.N) * t)
    return state.evolve(q=state.q * phase, t=state.t + t)


def propagate_periodic(state: FourierState, t: float) -> FourierState:
    """Free flow of a 2-periodic extension; the constant mode does not move."""
    phase = np.exp(1j * navier_frequencies(state.N) * t)
    return state.evolve(q=state.q * phase, p=state.p * phase, t=state.t + t)


def propagate_dirichlet(coeffs, t: float, basis: ClampedBasis) -> np.ndarray:
    """c_k -> exp(i mu_k^4 t) c_k."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape[-1] != basis.K:
        raise InputError("coefficient count does not match the clamped basis", {"K": basis.K})
    return coeffs * np.exp(1j * basis.eigenvalues * t)


def phi_functions(z) -> tuple[np.ndarray, np.ndarray]:
    """
    phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2.

    Four Taylor terms are used for |z| < 1e-3.
    """
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < SMALL_PHASE
    safe = np.where(small, 1.0, z)
    ez = np.exp(safe)
    phi1 = np.where(small, 1 + z / 2 + z ** 2 / 6 + z ** 3 / 24, (ez - 1) / safe)
    phi2 = np.where(small, 0.5 + z / 6 + z ** 2 / 24 + z ** 3 / 120, (ez - 1 - safe) / safe ** 2)
    return phi1, phi2


def exponential_weights(omega, dt) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Weights of int_0^dt exp(i omega (dt - s)) f(s) ds for f linear between f0 and f1.

    Returns:
        (exp(i omega dt), weight of f0, weight of f1)
    """
    omega = np.asarray(omega, dtype=float)
    dt = np.asarray(dt, dtype=float)
    z = 1j * omega * dt
    phi1, phi2 = phi_functions(z)
    return np.exp(z), dt * (phi1 - phi2), dt * phi2


def duhamel_history(omega, times, values, prefactor: complex = 1.0) -> np.ndarray:
    """
    prefactor * int_{t_0}^{t_j} exp(i omega (t_j - tau)) f(tau) dtau at every node.

    Args:
        omega: eigenvalue per mode
        times: strictly increasing grid, length J+1
        values: forcing rows, shape (J+1, modes)
    """
    times = np.asarray(times, dtype=float)
    f = np.atleast_2d(np.asarray(values, dtype=complex))
    if f.shape[0] != times.size:
        raise InputError("one forcing row per time node", {"rows": f.shape[0], "nodes": times.size})
    omega = np.asarray(omega, dtype=float)
    steps = np.diff(times)
    history = np.zeros(f.shape, dtype=complex)
    if steps.size == 0:
        return history
    uniform = np.allclose(steps, steps[0], rtol=1e-12, atol=0.0)
    if uniform:
        decay, w0, w1 = exponential_weights(omega, steps[0])
    for j, step in enumerate(steps):
        if not uniform:
            decay, w0, w1 = exponential_weights(omega, step)
        history[j + 1] = decay * history[j] + w0 * f[j] + w1 * f[j + 1]
    return prefactor * history


def _flow_frequencies(F: ForcingHistory, flow: Flow, basis: ClampedBasis | None) -> np.ndarray:
    if flow == "dirichlet":
        if basis is None:
            raise InputError("the clamped flow needs a ClampedBasis")
        if F.modes != basis.K:
            raise InputError("forcing modes do not match the clamped basis", {"K": basis.K, "modes": F.modes})
        return basis.eigenvalues
    return navier_frequencies(F.modes)


def _integrate_to(omega, times, values, t, prefactor) -> np.ndarray:
    j = int(np.searchsorted(times, t, side="right")) - 1
    j = min(j, times.size - 1)
    partial = duhamel_history(omega, times[: j + 1], values[: j + 1], prefactor=1.0)[-1] if j > 0 else np.zeros(values.shape[1], dtype=complex)
    remainder = t - times[j]
    if remainder > 0:
        weight = remainder / (times[j + 1] - times[j])
        f_t = (1 - weight) * values[j] + weight * values[j + 1]
        decay, w0, w1 = exponential_weights(omega, remainder)
        partial = decay * partial + w0 * values[j] + w1 * f_t
    return prefactor * partial


def duhamel(F: ForcingHistory, t: float, flow: Flow = "navier", basis: ClampedBasis | None = None, prefactor: complex = 1.0):
    """
    prefactor * int_{t_0}^t W(t - tau) f(tau) dtau for a piecewise-linear forcing history.

    Navier histories give a sine state, periodic histories keep their basis, clamped
    histories give a coefficient vector on `basis`.
    """
    if t < F.times[0] - 1e-14 or t > F.times[-1] + 1e-14:
        raise TimeRangeError(f"t={t} outside the forcing grid", {"start": F.times[0], "end": F.times[-1]})
    t = float(np.clip(t, F.times[0], F.times[-1]))
    omega = _flow_frequencies(F, flow, basis)
    sine = _integrate_to(omega, F.times, F.values, t, prefactor)
    if flow == "dirichlet":
        return sine
    if flow == "navier" or F.kind == "sine":
        return FourierState.sine(sine, t=t)
    cosine = _integrate_to(omega, F.times, F.cosine, t, prefactor)
    const = F.constant
    # the constant mode has zero frequency
    zero_mode = _integrate_to(np.zeros(1), F.times, const[:, None], t, prefactor)[0]
    if F.kind == "cosine":
        return FourierState.cosine(cosine, p0=zero_mode, t=t)
    return FourierState.mixed(sine, cosine, p0=zero_mode, t=t)


def convolve_series(h: BoundaryTrace, omega, times) -> np.ndarray:
    """
    int_0^t exp(i omega (t - tau)) h(tau) dtau in closed form for a series trace.

    For each lattice term a_n exp(i nu tau) the integral is
    (exp(i nu t) - exp(i omega t)) / (i (nu - omega)), taken as exp(i omega t) t phi1(i (nu - omega) t)
    near resonance.

    Returns:
        array of shape (len(times), len(omega))
    """
    if not h.has_series:
        raise InputError(f"trace {h.label} has no series form")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    out = np.zeros((times.size, omega.size), dtype=complex)
    if h.freqs.size == 0:
        return out
    free = np.exp(1j * np.multiply.outer(times, omega))
    for n, a_n in zip(h.freqs, h.coeffs):
        if a_n == 0:
            continue
        nu = float(n) * PI4
        gap = nu - omega
        z = 1j * np.multiply.outer(times, gap)
        near = np.abs(z) < SMALL_PHASE
        safe_gap = np.where(gap == 0, 1.0, gap)
        direct = (np.exp(1j * nu * times)[:, None] - free) / (1j * safe_gap)
        if np.any(near):
            phi1, _ = phi_functions(z)
            resonant = free * times[:, None] * phi1
            direct = np.where(near, resonant, direct)
        out += a_n * direct
    return out


def convolve_trace(h: BoundaryTrace, omega, times) -> np.ndarray:
    """Closed form for series traces, piecewise-linear exponential weights for sampled ones."""
    if h.has_series:
        return convolve_series(h, omega, times)
    if not h.has_samples:
        raise InputError(f"trace {h.label} has neither series nor samples")
    values = h.sample(times)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    logger.debug(f"Convolving sampled trace {h.label} on {len(times)} nodes")
    return duhamel_history(omega, times, np.repeat(values[:, None], omega.size, axis=1))
