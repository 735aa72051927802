import numpy as np
from loguru import logger

from data_modals.pydantic_models.flow_modals import ClampedBasis
from data_modals.pydantic_models.problem_modals import ProblemSpec, SolutionRecord, SolveDiagnostics
from data_modals.pydantic_models.spectral_modals import BoundaryTrace, FourierState
from services.boundary_ops import (
    clamped_field_values,
    dirichlet_clamped_boundary,
    dirichlet_traces,
)
from services.exceptions import InputError, ProjectionError
from services.linear_flow import build_clamped_basis, duhamel_history, propagate_periodic
from services.nonlinear_solver.fixed_point import AdaptivePicard, check_corners, mode_residual, time_l2
from services.nonlinear_solver.nonlinearity import pointwise_power
from services.spectral_core import odd_even_extend, quadrature_extend, sobolev_norm

ENDS = np.array([0.0, 1.0])


def _corner(h: BoundaryTrace) -> complex:
    return complex(h.sample(np.array([0.0]))[0])


def _mixed_rows(q: np.ndarray, p: np.ndarray, p0, x: np.ndarray) -> np.ndarray:
    """Rows of p0 + sum p_k cos(k pi x) + sum q_k sin(k pi x)."""
    phase = np.outer(np.pi * np.arange(1, q.shape[-1] + 1), x)
    return q @ np.sin(phase) + p @ np.cos(phase) + np.asarray(p0)[..., None]


class DirichletPicard(AdaptivePicard):
    """
    u = (u_o + u_e) + v + w on the clamped basis.

    u_o + u_e is the free periodic flow of phi's odd/even extension, v the boundary
    response to h - r, and w the Picard unknown
        w = i int_0^t W_D(t - tau) lam |u|^(p-2) u dtau
    carried as clamped-mode coefficients.
    """

    family = "dirichlet"

    def __init__(self, spec: ProblemSpec, basis: ClampedBasis, phi_o: FourierState, phi_e: FourierState, shifted: dict[str, BoundaryTrace], data_norm: float):
        super().__init__(spec, data_norm)
        self.basis = basis
        self.phi_o = phi_o
        self.phi_e = phi_e
        self.shifted = shifted
        self.omega = basis.eigenvalues
        self.modes = basis.evaluate_modes(basis.nodes)
        self.weighted = self.modes * basis.weights[:, None]
        self.metric_weights = (1.0 + basis.mu ** 2) ** spec.s
        self.projection_residual = 0.0
        self._times = None
        self._boundary = None
        self._base = None

    def _free_rows(self, times: np.ndarray):
        source = self.phi_o + self.phi_e
        states = [propagate_periodic(source, float(t)) for t in times]
        return np.array([state.q for state in states]), np.array([state.p for state in states])

    def prepare(self, times: np.ndarray) -> None:
        if self._times is not None and self._times.size == times.size and np.array_equal(self._times, times):
            return
        self._boundary = dirichlet_clamped_boundary(self.shifted, times, self.basis, compatibility=None)
        q, p = self._free_rows(times)
        nodes = self.basis.nodes
        self._base = _mixed_rows(q, p, np.full(times.size, self.phi_e.p0), nodes) + self.boundary_values(nodes)
        self._times = times

    def boundary_values(self, x: np.ndarray, derivative: int = 0) -> np.ndarray:
        """v^(n)(x, t_j) of the boundary response on the prepared grid."""
        return clamped_field_values(self._boundary, x, derivative)

    def field(self, iterate: np.ndarray) -> np.ndarray:
        """u at the quadrature nodes for every time node."""
        return self._base + iterate @ self.modes.T

    def projected_nonlinearity(self, iterate: np.ndarray) -> np.ndarray:
        spec = self.spec
        g = pointwise_power(self.field(iterate), spec.p, spec.lam)
        coeffs = g @ self.weighted
        energy = np.abs(g) ** 2 @ self.basis.weights
        active = energy > 0
        if np.any(active):
            misfit = np.abs(g - coeffs @ self.modes.T) ** 2 @ self.basis.weights
            residual = float(np.max(np.sqrt(misfit[active] / energy[active])))
            self.projection_residual = max(self.projection_residual, residual)
            if residual > spec.projection_tol:
                logger.error(f"Clamped projection residual {residual:.3e} above {spec.projection_tol:.3e}")
                raise ProjectionError("nonlinearity is not resolved by the clamped basis", residual)
        return coeffs

    def linear_part(self, times: np.ndarray) -> np.ndarray:
        self.prepare(times)
        return np.zeros((times.size, self.basis.K), dtype=complex)

    def apply(self, iterate: np.ndarray, times: np.ndarray, linear: np.ndarray) -> np.ndarray:
        self.prepare(times)
        if self.spec.lam == 0:
            return linear
        return linear + duhamel_history(self.omega, times, self.projected_nonlinearity(iterate), prefactor=1j)

    def distance(self, difference: np.ndarray, times: np.ndarray) -> float:
        return float(np.max(np.sqrt(np.abs(difference) ** 2 @ self.metric_weights)))

    def residual(self, iterate: np.ndarray, times: np.ndarray) -> float:
        self.prepare(times)
        if self.spec.lam == 0:
            rhs = np.zeros_like(iterate)
        else:
            rhs = self.projected_nonlinearity(iterate)
        return mode_residual(iterate, times, self.omega, rhs)


def picard_dirichlet(spec: ProblemSpec) -> SolutionRecord:
    """
    Local solution of the Dirichlet problem.

    The horizon is capped at 1. The boundary response is the cubic lift of h - r plus
    its clamped-mode correction, so the recovered traces carry the constant mode p0 of
    the extension through r1 and r2.

    Args:
        spec: Dirichlet ProblemSpec

    Returns:
        SolutionRecord: mixed states (half odd plus half even extension) on [0, T*],
        boundary values u(0), u(1), u_x(0), u_x(1) keyed h1, h2, h3, h4
    """
    if spec.family != "dirichlet":
        raise InputError("picard_dirichlet needs a Dirichlet ProblemSpec", {"family": spec.family})
    traces = spec.traces()
    phi = spec.initial
    values, slopes = phi.evaluate(ENDS), phi.evaluate(ENDS, derivative=1)
    compatible = check_corners(
        {
            "h1": (values[0], _corner(traces["h1"])),
            "h2": (values[1], _corner(traces["h2"])),
            "h3": (slopes[0], _corner(traces["h3"])),
            "h4": (slopes[1], _corner(traces["h4"])),
        },
        spec.compatibility,
    )
    phi_o, phi_e = odd_even_extend(phi, spec.N)
    r1, r2, r3, r4 = dirichlet_traces(phi, spec.N)
    extension = {"h1": r1, "h2": r2, "h3": r3, "h4": r4}
    shifted = {name: traces[name] - extension[name] for name in extension}

    basis = build_clamped_basis(spec.modes_clamped)
    horizon = min(spec.T, 1.0)
    sample_times = np.linspace(0.0, horizon, 257)
    data_norm = sobolev_norm(phi_o + phi_e, spec.s) + sum(
        float(np.max(np.abs(h.sample(sample_times)))) for h in traces.values() if not h.is_zero()
    )
    solver = DirichletPicard(spec, basis, phi_o, phi_e, shifted, data_norm)
    logger.info(
        f"Dirichlet solve: N={spec.N}, K={basis.K}, s={spec.s:g}, p={spec.p:g}, "
        f"lam={spec.lam:g}, T={horizon:g}, r={data_norm:.3e}"
    )

    outcome = solver.solve()
    times, W = outcome.times, outcome.iterate
    solver.prepare(times)
    U = solver.field(W)
    nodes, weights = basis.nodes, basis.weights
    states = [quadrature_extend(U[j], nodes, weights, spec.N, t=float(t)) for j, t in enumerate(times)]

    edge_values = solver.boundary_values(ENDS) + basis.evaluate(W, ENDS)
    edge_slopes = solver.boundary_values(ENDS, derivative=1) + basis.evaluate(W, ENDS, derivative=1)
    recovered = {
        "h1": r1.evaluate(times) + edge_values[:, 0],
        "h2": r2.evaluate(times) + edge_values[:, 1],
        "h3": r3.evaluate(times) + edge_slopes[:, 0],
        "h4": r4.evaluate(times) + edge_slopes[:, 1],
    }
    imposed = {name: h.sample(times) for name, h in traces.items()}
    mismatch = {name: time_l2(recovered[name] - imposed[name], times) for name in recovered}

    diagnostics = SolveDiagnostics(
        family="dirichlet",
        converged=outcome.converged,
        iterations=len(outcome.distances),
        distances=outcome.distances,
        contraction_factors=outcome.factors,
        t_star=float(times[-1]),
        halvings=solver.halvings,
        fixed_point_residual=solver.fixed_point_residual(outcome),
        mode_residual=solver.residual(W, times),
        projection_residual=solver.projection_residual,
        data_norm=data_norm,
        boundary_mismatch=mismatch,
        compatibility_ok=compatible,
    )
    logger.info(f"Dirichlet solve done: {diagnostics.iterations} iterations, T*={diagnostics.t_star:.3e}")
    return SolutionRecord(times=times, states=states, traces=recovered, imposed=imposed, diagnostics=diagnostics)
