from data_modals.pydantic_models.problem_modals import ProblemSpec, SolutionRecord
from services.nonlinear_solver.dirichlet_solver import picard_dirichlet
from services.nonlinear_solver.navier_solver import picard_navier


def solve_problem(spec: ProblemSpec) -> SolutionRecord:
    """Run the Picard pipeline matching spec.family."""
    if spec.family == "navier":
        return picard_navier(spec)
    return picard_dirichlet(spec)
