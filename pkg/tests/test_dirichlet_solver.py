import numpy as np
import pytest
from numpy.testing import assert_allclose

from data_modals.pydantic_models.problem_modals import InitialData, ProblemSpec, TraceSpec
from services.exceptions import CompatibilityError, ConstraintError, InputError
from services.nonlinear_solver import picard_dirichlet, solve_problem

# x^2 (1-x)^2: zero value and slope at both ends
BUBBLE = [0.0, 0.0, 1.0, -2.0, 1.0]


def _spec(**overrides) -> ProblemSpec:
    fields = dict(family="dirichlet", s=2.0, p=4, N=16, clamped_modes=8, T=1e-3, dt=1e-4)
    fields.update(overrides)
    return ProblemSpec(**fields)


def test_zero_data_gives_zero_solution():
    record = picard_dirichlet(_spec())
    diag = record.diagnostics
    assert diag.converged
    assert diag.family == "dirichlet"
    assert_allclose(record.l2_history(), 0.0, atol=1e-15)
    assert max(diag.boundary_mismatch.values()) < 1e-15


def test_linear_solution_keeps_homogeneous_boundary_values():
    spec = _spec(lam=0.0, initial=InitialData(kind="polynomial", poly=BUBBLE))
    record = picard_dirichlet(spec)
    assert record.diagnostics.compatibility_ok
    for name in ("h1", "h2", "h3", "h4"):
        assert_allclose(record.traces[name], 0.0, atol=1e-6)
        assert record.diagnostics.boundary_mismatch[name] <= 1e-6
    assert record.states[0].basis == "mixed"


def test_small_data_nonlinear_solve_converges():
    spec = _spec(T=5e-4, dt=5e-5, initial=InitialData(kind="polynomial", poly=BUBBLE, scale=0.01))
    record = solve_problem(spec)
    diag = record.diagnostics
    assert diag.converged
    assert diag.projection_residual < spec.projection_tol
    assert all(np.isfinite(record.l2_history()))
    assert max(diag.boundary_mismatch.values()) <= 1e-6


def test_boundary_data_reaches_the_edges():
    h1 = TraceSpec(kind="series", terms={0: (-1.0, 0.0), 1: (1.0, 0.0)}, scale=0.1)
    record = picard_dirichlet(_spec(lam=0.0, h1=h1))
    assert record.diagnostics.boundary_mismatch["h1"] <= 1e-6
    assert_allclose(record.traces["h1"], record.imposed["h1"], atol=1e-6)


def test_mixed_series_boundary_realization_is_rejected():
    with pytest.raises(ConstraintError) as info:
        _spec(dirichlet_boundary="periodic")
    assert info.value.constraint == "dirichlet_boundary=clamped"


@pytest.mark.parametrize("N", [16, 32, 64])
def test_boundary_recovery_holds_as_modes_double(N):
    # h1(t) = 0.1 (e^{i pi^4 t} - 1) on top of a bubble initial profile
    h1 = TraceSpec(kind="series", terms={0: (-1.0, 0.0), 1: (1.0, 0.0)}, scale=0.1)
    spec = _spec(lam=0.0, N=N, clamped_modes=N // 2, T=2e-3, h1=h1, initial=InitialData(kind="polynomial", poly=BUBBLE))
    record = picard_dirichlet(spec)
    assert record.diagnostics.compatibility_ok
    assert record.diagnostics.boundary_mismatch["h1"] <= 1e-6
    assert_allclose(record.traces["h1"], record.imposed["h1"], atol=1e-6)
    assert_allclose(record.traces["h3"], 0.0, atol=1e-6)


def test_corner_mismatch_is_enforced():
    h3 = TraceSpec(kind="series", terms={0: (1.0, 0.0)})
    with pytest.raises(CompatibilityError):
        picard_dirichlet(_spec(h3=h3))


def test_dirichlet_solver_needs_dirichlet_data():
    with pytest.raises(InputError):
        picard_dirichlet(ProblemSpec(family="navier", s=1.0, p=4, N=16, T=1e-3, dt=1e-4))
