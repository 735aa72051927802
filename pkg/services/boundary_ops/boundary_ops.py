import numpy as np
from loguru import logger
from numpy.polynomial import Polynomial

from data_modals.pydantic_models.boundary_modals import BetaTable, ClampedBoundaryField
from data_modals.pydantic_models.flow_modals import ClampedBasis
from data_modals.pydantic_models.spectral_modals import BoundaryTrace, FourierState
from services.exceptions import CompatibilityError, InputError
from services.linear_flow import convolve_trace, navier_frequencies
from services.spectral_core import odd_even_extend

COMPATIBILITY_TOL = 1e-10

_ONE_MINUS_X = Polynomial([1.0, -1.0])
# Navier lift shapes: u = h1 at x = 0, u_xx = h5 at x = 0, u = u_xx = 0 at x = 1
NAVIER_VALUE = _ONE_MINUS_X
NAVIER_CURVATURE = (_ONE_MINUS_X ** 3 - _ONE_MINUS_X) / 6.0
# Dirichlet lift shapes: u = h1, u_x = h3 at x = 0, u = u_x = 0 at x = 1
DIRICHLET_VALUE = 3.0 * _ONE_MINUS_X ** 2 - 2.0 * _ONE_MINUS_X ** 3
DIRICHLET_SLOPE = _ONE_MINUS_X ** 2 - _ONE_MINUS_X ** 3


def build_beta_table(N: int) -> BetaTable:
    if N < 1:
        raise InputError("N must be at least 1")
    k = np.arange(1, N + 1, dtype=np.int64)
    kp = np.pi * k
    c = np.where(k % 2 == 0, 1.0, -1.0)
    return BetaTable(
        k=k,
        navier0_im=2.0 * (kp * kp * kp),
        navier2_im=-2.0 * kp,
        beta01_im=-(kp * kp * kp) - 6.0 * kp * (c + 1.0),
        beta02_im=12.0 * (kp - 1.0),
        beta11_im=-2.0 * kp * (c + 2.0),
        beta12_im=kp * kp + 6.0 * (c - 1.0),
    )


def _table(N: int, table: BetaTable | None) -> BetaTable:
    if table is None or table.N < N:
        return build_beta_table(N)
    return table


def mirror_signs(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Sign patterns of x -> 1-x on sine and cosine coefficients."""
    k = np.arange(1, N + 1)
    cosine = np.where(k % 2 == 0, 1.0, -1.0)
    return -cosine, cosine


def mirror(state: FourierState) -> FourierState:
    """Reflection x -> 1-x: q_k -> (-1)^(k+1) q_k, p_k -> (-1)^k p_k, p0 fixed."""
    sine_sign, cosine_sign = mirror_signs(state.N)
    return state.evolve(q=state.q * sine_sign, p=state.p * cosine_sign)


def check_compatibility(h: BoundaryTrace, enforce: bool | None) -> bool:
    """h(0) = 0 corner condition; raises when enforced, warns when not, skipped for None."""
    if enforce is None:
        return True
    if h.has_samples and h.sample_times[0] > 0:
        start = h.sample_values[0]
    else:
        start = complex(np.asarray(h.evaluate(0.0)))
    if abs(start) <= COMPATIBILITY_TOL:
        return True
    if enforce:
        raise CompatibilityError(f"trace {h.label} does not vanish at t=0", {"h(0)": f"{abs(start):.3e}"})
    logger.warning(f"Trace {h.label} violates h(0)=0 (|h(0)|={abs(start):.3e}); output marked incompatible")
    return False


def _grid_to(h: BoundaryTrace, t: float) -> np.ndarray:
    if h.has_series or t <= 0:
        return np.array([0.0, t]) if t > 0 else np.array([0.0])
    inner = h.sample_times[(h.sample_times > 0) & (h.sample_times < t)]
    return np.concatenate([[0.0], inner, [t]])


def _single_time(h: BoundaryTrace, t: float, N: int, weights: np.ndarray) -> np.ndarray:
    if t < 0:
        raise InputError("boundary operators need t >= 0", {"t": t})
    grid = _grid_to(h, t)
    if grid.size == 1:
        return np.zeros(N, dtype=complex)
    return weights * convolve_trace(h, navier_frequencies(N), grid)[-1]


def w0n_history(h: BoundaryTrace, times, N: int, table: BetaTable | None = None, compatibility: bool | None = True) -> np.ndarray:
    """Sine coefficients of W_{0,N} h at every node, shape (len(times), N)."""
    check_compatibility(h, compatibility)
    if h.is_zero():
        return np.zeros((len(times), N), dtype=complex)
    weights = _table(N, table).w0n_weights[:N]
    return weights * convolve_trace(h, navier_frequencies(N), times)


def w2n_history(h: BoundaryTrace, times, N: int, table: BetaTable | None = None, compatibility: bool | None = True) -> np.ndarray:
    """Sine coefficients of W_{2,N} h at every node."""
    check_compatibility(h, compatibility)
    if h.is_zero():
        return np.zeros((len(times), N), dtype=complex)
    weights = _table(N, table).w2n_weights[:N]
    return weights * convolve_trace(h, navier_frequencies(N), times)


def w0n(h: BoundaryTrace, t: float, N: int, table: BetaTable | None = None, compatibility: bool | None = True) -> FourierState:
    """
    Boundary integral operator for u(0,t) = h(t) with homogeneous Navier data elsewhere.

    q_k(t) = -2i (k pi)^3 int_0^t exp(i (k pi)^4 (t - tau)) h(tau) dtau.
    """
    check_compatibility(h, compatibility)
    return FourierState.sine(_single_time(h, t, N, _table(N, table).w0n_weights[:N]), t=t)


def w2n(h: BoundaryTrace, t: float, N: int, table: BetaTable | None = None, compatibility: bool | None = True) -> FourierState:
    """
    Boundary integral operator for u_xx(0,t) = h(t).

    q_k(t) = 2i k pi int_0^t exp(i (k pi)^4 (t - tau)) h(tau) dtau.
    """
    check_compatibility(h, compatibility)
    return FourierState.sine(_single_time(h, t, N, _table(N, table).w2n_weights[:N]), t=t)


def w0d(h: BoundaryTrace, t: float, N: int, table: BetaTable | None = None, compatibility: bool | None = True) -> FourierState:
    """
    Mixed-series operator for u(0,t) data on the zero-extended interval.

    q_k = beta01_k conv_k, p_k = beta02_k conv_k with conv_k = int_0^t e^{i (k pi)^4 (t - tau)} h dtau.
    The constant mode is left to the caller.
    """
    check_compatibility(h, compatibility)
    table = _table(N, table)
    conv = _single_time(h, t, N, np.ones(N))
    return FourierState.mixed(table.beta01[:N] * conv, table.beta02[:N] * conv, t=t)


def w1d(h: BoundaryTrace, t: float, N: int, table: BetaTable | None = None, compatibility: bool | None = True) -> FourierState:
    """
    Mixed-series operator for u_x(0,t) data: q_k = beta11_k conv_k, p_k = beta12_k conv_k.

    beta_ij = -i (k pi)^4 b_ij with b_ij the lift coefficients, so no further -i is applied.
    """
    check_compatibility(h, compatibility)
    table = _table(N, table)
    conv = _single_time(h, t, N, np.ones(N))
    return FourierState.mixed(table.beta11[:N] * conv, table.beta12[:N] * conv, t=t)


def navier_boundary_history(traces: dict[str, BoundaryTrace], times, N: int, compatibility: bool | None = True) -> np.ndarray:
    """
    W_{0,N} h1 + (W_{0,N} h2)(1-x) + W_{2,N} h5 + (W_{2,N} h6)(1-x) on the grid.

    The mirrored curvature term carries h6.
    """
    table = build_beta_table(N)
    sine_sign, _ = mirror_signs(N)
    total = w0n_history(traces["h1"], times, N, table, compatibility)
    total = total + sine_sign * w0n_history(traces["h2"], times, N, table, compatibility)
    total = total + w2n_history(traces["h5"], times, N, table, compatibility)
    total = total + sine_sign * w2n_history(traces["h6"], times, N, table, compatibility)
    return total


def navier_forcing(traces: dict[str, BoundaryTrace], times, N: int) -> np.ndarray:
    """Per-mode boundary forcing F_k(t) with q_k' = i (k pi)^4 q_k + F_k(t) for the linear boundary response."""
    table = build_beta_table(N)
    sine_sign, _ = mirror_signs(N)
    values = {name: trace.sample(times)[:, None] for name, trace in traces.items()}
    w0, w2 = table.w0n_weights, table.w2n_weights
    return w0 * (values["h1"] + sine_sign * values["h2"]) + w2 * (values["h5"] + sine_sign * values["h6"])


def navier_lift(h1, h5, x, derivative: int = 0) -> np.ndarray:
    """(1-x)(h1 - h5/6) + (1-x)^3 h5/6 and its x-derivatives."""
    x = np.asarray(x, dtype=float)
    return h1 * NAVIER_VALUE.deriv(derivative)(x) + h5 * NAVIER_CURVATURE.deriv(derivative)(x)


def dirichlet_lift(h1, h3, x, derivative: int = 0) -> np.ndarray:
    """(1-x)^2 (3 h1 + h3) - (1-x)^3 (2 h1 + h3) and its x-derivatives."""
    x = np.asarray(x, dtype=float)
    return h1 * DIRICHLET_VALUE.deriv(derivative)(x) + h3 * DIRICHLET_SLOPE.deriv(derivative)(x)


def dirichlet_lift_shapes(x, derivative: int = 0) -> np.ndarray:
    """Columns multiplying (h1, h3, h2, h4): f(x), g(x), f(1-x), -g(1-x) and derivatives."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    reflected = 1.0 - x
    sign = (-1.0) ** derivative
    return np.column_stack([
        DIRICHLET_VALUE.deriv(derivative)(x),
        DIRICHLET_SLOPE.deriv(derivative)(x),
        sign * DIRICHLET_VALUE.deriv(derivative)(reflected),
        -sign * DIRICHLET_SLOPE.deriv(derivative)(reflected),
    ])


def traces_from_extension(phi_o: FourierState, phi_e: FourierState) -> tuple[BoundaryTrace, ...]:
    """r1..r4: boundary values and slopes of u_o + u_e as series on the k^4 lattice."""
    N = phi_o.N
    k = np.arange(1, N + 1, dtype=np.int64)
    lattice = np.concatenate([[0], k ** 4])
    cos_kpi = np.where(k % 2 == 0, 1.0, -1.0)
    slopes = np.pi * k * phi_o.q
    r1 = BoundaryTrace.from_series(lattice, np.concatenate([[phi_e.p0], phi_e.p]), label="r1")
    r2 = BoundaryTrace.from_series(lattice, np.concatenate([[phi_e.p0], cos_kpi * phi_e.p]), label="r2")
    r3 = BoundaryTrace.from_series(k ** 4, slopes, label="r3")
    r4 = BoundaryTrace.from_series(k ** 4, cos_kpi * slopes, label="r4")
    return r1, r2, r3, r4


def dirichlet_traces(phi, N: int, times=None) -> tuple[BoundaryTrace, ...]:
    """
    Traces r1..r4 of the periodic flow of phi's odd/even extension.

    r1 = p0 + sum p_k e^{i(k pi)^4 t}, r2 = p0 + sum cos(k pi) p_k e^{...},
    r3 = sum k pi q_k e^{...}, r4 = sum cos(k pi) k pi q_k e^{...}.
    With `times` the series are also sampled there.
    """
    phi_o, phi_e = odd_even_extend(phi, N)
    traces = traces_from_extension(phi_o, phi_e)
    if times is None:
        return traces
    times = np.asarray(times, dtype=float)
    return tuple(
        BoundaryTrace(freqs=r.freqs, coeffs=r.coeffs, sample_times=times, sample_values=r.evaluate(times), label=r.label)
        for r in traces
    )


def dirichlet_clamped_boundary(traces: dict[str, BoundaryTrace], times, basis: ClampedBasis, compatibility: bool | None = True) -> ClampedBoundaryField:
    """
    Clamped-mode realization of the Dirichlet boundary response.

    v = f + sum_k z_k phi_k, where f is the cubic lift of (h1, h3, h2, h4) and
    z_k = -i mu_k^4 int_0^t e^{i mu_k^4 (t - tau)} g_k dtau + g_k(0) e^{i mu_k^4 t} - g_k(t),
    g_k = <f, phi_k>. Boundary values and slopes of v are those of f.
    """
    times = np.asarray(times, dtype=float)
    ordered = [traces["h1"], traces["h3"], traces["h2"], traces["h4"]]
    for h in ordered:
        check_compatibility(h, compatibility)
    lift = np.column_stack([h.sample(times) for h in ordered])
    shapes = basis.project(dirichlet_lift_shapes(basis.nodes))  # (K, 4)
    omega = basis.eigenvalues
    g = lift @ shapes.T
    conv = np.zeros((times.size, basis.K), dtype=complex)
    for column, h in enumerate(ordered):
        if h.is_zero():
            continue
        conv += shapes[:, column] * convolve_trace(h, omega, times)
    z = -1j * omega * conv + g[0] * np.exp(1j * np.multiply.outer(times, omega)) - g
    return ClampedBoundaryField(times=times, lift=lift, z=z, basis=basis)


def clamped_field_values(field: ClampedBoundaryField, x, derivative: int = 0) -> np.ndarray:
    """v^(n)(x, t_j) for every node, shape (len(times), len(x))."""
    lift = field.lift @ dirichlet_lift_shapes(x, derivative).T
    return lift + field.basis.evaluate(field.z, x, derivative)
