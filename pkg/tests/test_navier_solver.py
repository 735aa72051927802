import numpy as np
import pytest
from numpy.testing import assert_allclose

from data_modals.pydantic_models.problem_modals import InitialData, ProblemSpec, TraceSpec
from services.exceptions import CompatibilityError, ConstraintError, InputError, NoConvergenceError
from services.nonlinear_solver import AdaptivePicard, homogenize_navier, picard_navier, solve_problem, time_grid


def _spec(**overrides) -> ProblemSpec:
    fields = dict(family="navier", s=1.0, p=4, N=16, T=1e-3, dt=1e-4)
    fields.update(overrides)
    return ProblemSpec(**fields)


def test_time_grid_step_never_exceeds_dt():
    grid = time_grid(1e-3, 3e-4)
    assert grid[-1] == pytest.approx(1e-3)
    assert np.max(np.diff(grid)) <= 3e-4
    assert grid.size == 5


def test_zero_data_gives_zero_solution():
    record = picard_navier(_spec())
    diag = record.diagnostics
    assert diag.converged
    assert diag.iterations == 1
    assert diag.t_star == pytest.approx(1e-3)
    assert_allclose(record.l2_history(), 0.0)
    assert all(value == 0.0 for value in diag.boundary_mismatch.values())


def test_linear_flow_when_lambda_vanishes():
    spec = _spec(lam=0.0, initial=InitialData(kind="sine_modes", modes={1: (1.0, 0.0)}))
    record = picard_navier(spec)
    t = record.times[-1]
    assert_allclose(record.states[-1].q[0], np.exp(1j * np.pi ** 4 * t), atol=1e-12)
    assert record.diagnostics.fixed_point_residual == 0.0


def test_small_data_contracts_and_conserves_mass():
    spec = _spec(
        N=32,
        dt=1e-5,
        tol=1e-14,
        initial=InitialData(kind="sine_modes", modes={1: (0.01, 0.0), 2: (0.005, 0.0)}),
    )
    record = picard_navier(spec)
    diag = record.diagnostics
    assert diag.converged
    assert diag.halvings == 0
    assert all(factor < 0.5 for factor in diag.contraction_factors)
    assert len(diag.distances) >= 2
    assert diag.fixed_point_residual < 1e-13
    l2 = record.l2_history()
    assert np.ptp(l2) / l2[0] < 1e-6


def test_homogenization_carries_the_corner_data():
    spec = _spec(
        lam=0.0,
        initial=InitialData(kind="polynomial", poly=[1.0, -1.0]),
        h1=TraceSpec(kind="series", terms={0: (1.0, 0.0)}),
    )
    gamma, shifted = homogenize_navier(spec)
    assert gamma.a == 1.0
    assert gamma.evaluate(0.25) == pytest.approx(0.75)
    assert shifted["h1"].is_zero()


def test_stationary_inhomogeneous_solution_keeps_its_boundary_value():
    spec = _spec(
        lam=0.0,
        initial=InitialData(kind="polynomial", poly=[1.0, -1.0]),
        h1=TraceSpec(kind="series", terms={0: (1.0, 0.0)}),
    )
    record = solve_problem(spec)
    assert record.diagnostics.compatibility_ok
    assert_allclose(record.traces["h1"], 1.0, atol=1e-10)
    assert record.diagnostics.boundary_mismatch["h1"] < 1e-10


def test_corner_mismatch_is_enforced_or_reported():
    h1 = TraceSpec(kind="series", terms={0: (1.0, 0.0)})
    with pytest.raises(CompatibilityError):
        picard_navier(_spec(lam=0.0, h1=h1))
    record = picard_navier(_spec(lam=0.0, h1=h1, compatibility=False))
    assert not record.diagnostics.compatibility_ok


def test_homogenization_needs_navier_data():
    with pytest.raises(InputError):
        homogenize_navier(ProblemSpec(family="dirichlet", s=2.0, p=4, N=16, T=1e-3, dt=1e-4))


def test_large_data_gives_up_with_the_data_norm():
    spec = _spec(lam=1e4, initial=InitialData(kind="sine_modes", modes={1: (100.0, 0.0)}))
    with pytest.raises(NoConvergenceError) as info:
        picard_navier(spec)
    assert info.value.data_norm > 100.0
    assert info.value.t_star < spec.dt


@pytest.mark.parametrize(
    "fields, constraint",
    [
        (dict(s=1.5), "s!=n+1/2"),
        (dict(s=0.4), "navier:s>1/2"),
        (dict(family="dirichlet", s=1.2), "dirichlet:s>10/7"),
        (dict(p=2.0), "p>=3"),
        (dict(s=2.0, p=3.0), "floor(s)<=p-2"),
        (dict(family="dirichlet", s=2.0, dirichlet_boundary="periodic"), "dirichlet_boundary=clamped"),
    ],
)
def test_problem_constraints(fields, constraint):
    with pytest.raises(ConstraintError) as info:
        _spec(**fields)
    assert info.value.constraint == constraint


def test_cubic_small_data_contracts_quickly():
    spec = _spec(p=3, initial=InitialData(kind="sine_modes", modes={1: (1e-3 / np.pi, 0.0)}))
    record = picard_navier(spec)
    diag = record.diagnostics
    assert diag.converged
    assert diag.iterations <= 8
    assert all(factor <= 0.5 for factor in diag.contraction_factors)
    l2 = record.l2_history()
    assert np.ptp(l2) / l2[0] < 1e-4


def test_boundary_mismatch_falls_as_modes_double():
    h1 = TraceSpec(kind="series", terms={0: (-1.0, 0.0), 1: (1.0, 0.0)}, scale=0.1)
    mismatch = []
    for N in (32, 64, 128, 256):
        record = picard_navier(_spec(lam=0.0, N=N, T=2e-3, h1=h1))
        mismatch.append(record.diagnostics.boundary_mismatch["h1"])
    for coarse, fine in zip(mismatch, mismatch[1:]):
        assert fine < coarse / 4


class ScaledPicard(AdaptivePicard):
    """Gamma(v) = 1 + rate T* v: contracts only once rate T* < 1."""

    def __init__(self, spec, rate):
        super().__init__(spec, data_norm=1.0)
        self.rate = rate

    def linear_part(self, times):
        return np.ones((times.size, 1), dtype=complex)

    def apply(self, iterate, times, linear):
        return linear + self.rate * times[-1] * iterate

    def distance(self, difference, times):
        return float(np.max(np.abs(difference)))


@pytest.mark.parametrize("T, dt", [(1e-3, 1e-5), (4.0, 1e-2)])
def test_existence_time_halves_until_the_map_contracts(T, dt):
    horizon = min(T, 1.0)
    picard = ScaledPicard(_spec(T=T, dt=dt, tol=1e-8, max_iter=100), rate=2.4 / horizon)
    outcome = picard.solve()
    assert outcome.converged
    assert picard.halvings == 2
    assert picard.t_star == pytest.approx(horizon / 4)
    assert outcome.times[-1] == pytest.approx(picard.t_star)
    assert outcome.factors[-1] == pytest.approx(0.6, rel=1e-6)
