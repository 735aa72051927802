from .clamped import build_clamped_basis, characteristic, clamped_root
from .linear_flow import (
    convolve_series,
    convolve_trace,
    duhamel,
    duhamel_history,
    exponential_weights,
    navier_frequencies,
    phi_functions,
    propagate_dirichlet,
    propagate_navier,
    propagate_periodic,
)

__all__ = [
    "build_clamped_basis",
    "characteristic",
    "clamped_root",
    "convolve_series",
    "convolve_trace",
    "duhamel",
    "duhamel_history",
    "exponential_weights",
    "navier_frequencies",
    "phi_functions",
    "propagate_dirichlet",
    "propagate_navier",
    "propagate_periodic",
]
