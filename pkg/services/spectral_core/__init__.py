from .spectral_core import (
    BoundaryLimits,
    SeriesBoundaryValues,
    critical_exponent,
    gauss_legendre,
    odd_even_extend,
    quadrature_extend,
    reconstruct,
    reconstruct_sine_rows,
    series_boundary_values,
    sine_boundary_limits,
    sine_coefficients,
    sobolev_norm,
    sobolev_norm_rows,
    sobolev_weights,
    trace_sobolev_norm,
    uniform_grid,
)

__all__ = [
    "BoundaryLimits",
    "SeriesBoundaryValues",
    "critical_exponent",
    "gauss_legendre",
    "odd_even_extend",
    "quadrature_extend",
    "reconstruct",
    "reconstruct_sine_rows",
    "series_boundary_values",
    "sine_boundary_limits",
    "sine_coefficients",
    "sobolev_norm",
    "sobolev_norm_rows",
    "sobolev_weights",
    "trace_sobolev_norm",
    "uniform_grid",
]
