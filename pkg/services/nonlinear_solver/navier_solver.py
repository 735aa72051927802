import numpy as np
from loguru import logger

from data_modals.pydantic_models.problem_modals import Homogenization, ProblemSpec, SolutionRecord, SolveDiagnostics
from data_modals.pydantic_models.spectral_modals import BoundaryTrace, FourierState
from services.boundary_ops import navier_boundary_history, navier_forcing
from services.exceptions import InputError
from services.linear_flow import duhamel_history, navier_frequencies
from services.nonlinear_solver.fixed_point import (
    AdaptivePicard,
    check_corners,
    mode_residual,
    time_l2,
)
from services.nonlinear_solver.nonlinearity import nonlinearity_sine_rows
from services.spectral_core import (
    odd_even_extend,
    reconstruct_sine_rows,
    sine_boundary_limits,
    sine_coefficients,
    sobolev_norm,
    sobolev_norm_rows,
    uniform_grid,
)

MIN_MODES_FOR_LIMITS = 8


def _corner(h: BoundaryTrace) -> complex:
    return complex(h.sample(np.array([0.0]))[0])


def homogenize_navier(spec: ProblemSpec) -> tuple[Homogenization, dict[str, BoundaryTrace]]:
    """
    Stationary cubic gamma carrying the t = 0 Navier corner data, and the shifted traces.

    gamma(0) = h1(0), gamma(1) = h2(0), gamma''(0) = h5(0), gamma''(1) = h6(0). Since
    gamma_xxxx = 0 it solves the linear equation, so v = u - gamma has boundary data
    h - h(0), which vanish at t = 0.
    """
    if spec.family != "navier":
        raise InputError("homogenization applies to Navier data", {"family": spec.family})
    traces = spec.traces()
    corners = {name: _corner(h) for name, h in traces.items()}
    gamma = Homogenization(a=corners["h1"], b=corners["h2"], e=corners["h5"], f=corners["h6"])
    ends = np.array([0.0, 1.0])
    found = np.concatenate([gamma.evaluate(ends), gamma.evaluate(ends, derivative=2)])
    expected = np.array([corners["h1"], corners["h2"], corners["h5"], corners["h6"]])
    if not np.allclose(found, expected, rtol=1e-12, atol=1e-12):
        raise InputError("homogenization polynomial misses its corner values", {"gap": f"{np.max(np.abs(found - expected)):.3e}"})
    shifted = {name: (h if corners[name] == 0 else h.shifted(corners[name])) for name, h in traces.items()}
    return gamma, shifted


class NavierPicard(AdaptivePicard):
    """
    Gamma(v) = e^{it d^4} (phi - gamma) + boundary response of the shifted traces
               + i int_0^t e^{i(t-tau) d^4} lam |v + gamma|^(p-2) (v + gamma) dtau

    on sine coefficients; the iteration metric is the sup-in-time H^s norm, or the
    discrete L4 norm over (0,1) x (0,T*) for the low-regularity experiment.
    """

    family = "navier"

    def __init__(self, spec: ProblemSpec, gamma: Homogenization, shifted: dict[str, BoundaryTrace], v0: FourierState, data_norm: float):
        super().__init__(spec, data_norm)
        self.gamma = gamma
        self.shifted = shifted
        self.v0 = v0
        self.omega = navier_frequencies(spec.N)
        self.offset = None if gamma.is_zero() else gamma.evaluate
        self.metric = "L4" if spec.low_regularity_experiment and spec.s <= 0.5 else "Hs"

    def linear_part(self, times: np.ndarray) -> np.ndarray:
        free = self.v0.q * np.exp(1j * np.multiply.outer(times, self.omega))
        return free + navier_boundary_history(self.shifted, times, self.spec.N, compatibility=None)

    def nonlinear_rows(self, iterate: np.ndarray) -> np.ndarray:
        spec = self.spec
        return nonlinearity_sine_rows(iterate, spec.p, spec.lam, spec.dealias, offset=self.offset)

    def apply(self, iterate: np.ndarray, times: np.ndarray, linear: np.ndarray) -> np.ndarray:
        if self.spec.lam == 0:
            return linear
        return linear + duhamel_history(self.omega, times, self.nonlinear_rows(iterate), prefactor=1j)

    def distance(self, difference: np.ndarray, times: np.ndarray) -> float:
        if self.metric == "L4":
            grid = uniform_grid(2 * self.spec.N)
            values = np.abs(reconstruct_sine_rows(difference, grid)) ** 4
            return float(np.trapezoid(np.trapezoid(values, grid, axis=1), times) ** 0.25)
        return float(np.max(sobolev_norm_rows(difference, self.spec.s)))

    def residual(self, iterate: np.ndarray, times: np.ndarray) -> float:
        forcing = navier_forcing(self.shifted, times, self.spec.N)
        rhs = self.nonlinear_rows(iterate) - 1j * forcing
        return mode_residual(iterate, times, self.omega, rhs)


def _initial_sine_state(spec: ProblemSpec, gamma: Homogenization) -> FourierState:
    if gamma.is_zero():
        exact = spec.initial.exact_sine_state(spec.N)
        if exact is not None:
            return exact
        return sine_coefficients(spec.initial, spec.N)
    return sine_coefficients(lambda x: spec.initial(x) - gamma(x), spec.N)


def _data_norm(v0: FourierState, traces: dict[str, BoundaryTrace], s: float, horizon: float) -> float:
    sample_times = np.linspace(0.0, horizon, 257)
    boundary = sum(float(np.max(np.abs(h.sample(sample_times)))) for h in traces.values() if not h.is_zero())
    return sobolev_norm(v0, s) + boundary


def picard_navier(spec: ProblemSpec) -> SolutionRecord:
    """
    Local solution of the Navier problem by Picard iteration on the Duhamel map.

    Args:
        spec: Navier ProblemSpec

    Returns:
        SolutionRecord: sine (or mixed, when gamma is nonzero) states on [0, T*], recovered
        boundary values keyed like the imposed traces, and iteration diagnostics
    """
    if spec.family != "navier":
        raise InputError("picard_navier needs a Navier ProblemSpec", {"family": spec.family})
    traces = spec.traces()
    phi = spec.initial
    ends = np.array([0.0, 1.0])
    values, curvatures = phi.evaluate(ends), phi.evaluate(ends, derivative=2)
    compatible = check_corners(
        {
            "h1": (values[0], _corner(traces["h1"])),
            "h2": (values[1], _corner(traces["h2"])),
            "h5": (curvatures[0], _corner(traces["h5"])),
            "h6": (curvatures[1], _corner(traces["h6"])),
        },
        spec.compatibility,
    )
    gamma, shifted = homogenize_navier(spec)
    v0 = _initial_sine_state(spec, gamma)
    horizon = min(spec.T, 1.0)
    solver = NavierPicard(spec, gamma, shifted, v0, _data_norm(v0, traces, spec.s, horizon))
    logger.info(f"Navier solve: N={spec.N}, s={spec.s:g}, p={spec.p:g}, lam={spec.lam:g}, T={horizon:g}, r={solver.data_norm:.3e}")

    outcome = solver.solve()
    times, V = outcome.times, outcome.iterate
    gamma_state = None
    if not gamma.is_zero():
        gamma_odd, gamma_even = odd_even_extend(gamma.evaluate, spec.N)
        gamma_state = gamma_odd + gamma_even
    states = []
    for j, t in enumerate(times):
        state = FourierState.sine(V[j], t=float(t))
        states.append(state if gamma_state is None else state + gamma_state)

    imposed = {name: h.sample(times) for name, h in traces.items()}
    recovered, mismatch = {}, {}
    if spec.N >= MIN_MODES_FOR_LIMITS:
        limits = sine_boundary_limits(V)
        corner_values = gamma.evaluate(ends)
        corner_curvatures = gamma.evaluate(ends, derivative=2)
        recovered = {
            "h1": limits.u0 + corner_values[0],
            "h2": limits.u1 + corner_values[1],
            "h5": limits.uxx0 + corner_curvatures[0],
            "h6": limits.uxx1 + corner_curvatures[1],
        }
        mismatch = {name: time_l2(recovered[name] - imposed[name], times) for name in recovered}
    else:
        logger.debug(f"N={spec.N} too small to recover boundary limits")

    diagnostics = SolveDiagnostics(
        family="navier",
        metric=solver.metric,
        converged=outcome.converged,
        iterations=len(outcome.distances),
        distances=outcome.distances,
        contraction_factors=outcome.factors,
        t_star=float(times[-1]),
        halvings=solver.halvings,
        fixed_point_residual=solver.fixed_point_residual(outcome),
        mode_residual=solver.residual(V, times),
        data_norm=solver.data_norm,
        boundary_mismatch=mismatch,
        compatibility_ok=compatible,
    )
    logger.info(f"Navier solve done: {diagnostics.iterations} iterations, T*={diagnostics.t_star:.3e}")
    return SolutionRecord(times=times, states=states, traces=recovered, imposed=imposed, diagnostics=diagnostics)
