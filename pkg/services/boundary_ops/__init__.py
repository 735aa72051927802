from .boundary_ops import (
    build_beta_table,
    check_compatibility,
    clamped_field_values,
    dirichlet_clamped_boundary,
    dirichlet_lift,
    dirichlet_lift_shapes,
    dirichlet_traces,
    mirror,
    mirror_signs,
    navier_boundary_history,
    navier_forcing,
    navier_lift,
    traces_from_extension,
    w0d,
    w0n,
    w0n_history,
    w1d,
    w2n,
    w2n_history,
)

__all__ = [
    "build_beta_table",
    "check_compatibility",
    "clamped_field_values",
    "dirichlet_clamped_boundary",
    "dirichlet_lift",
    "dirichlet_lift_shapes",
    "dirichlet_traces",
    "mirror",
    "mirror_signs",
    "navier_boundary_history",
    "navier_forcing",
    "navier_lift",
    "traces_from_extension",
    "w0d",
    "w0n",
    "w0n_history",
    "w1d",
    "w2n",
    "w2n_history",
]
