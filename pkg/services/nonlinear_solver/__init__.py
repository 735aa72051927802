from .dirichlet_solver import DirichletPicard, picard_dirichlet
from .fixed_point import AdaptivePicard, PicardOutcome, check_corners, time_grid
from .navier_solver import NavierPicard, homogenize_navier, picard_navier
from .nonlinearity import nonlinearity, nonlinearity_cosine_rows, nonlinearity_sine_rows, padded_points, pointwise_power
from .solve import solve_problem

__all__ = [
    "AdaptivePicard",
    "DirichletPicard",
    "NavierPicard",
    "PicardOutcome",
    "check_corners",
    "homogenize_navier",
    "nonlinearity",
    "nonlinearity_cosine_rows",
    "nonlinearity_sine_rows",
    "padded_points",
    "picard_dirichlet",
    "picard_navier",
    "pointwise_power",
    "solve_problem",
    "time_grid",
]
