from .identities import closed_form, identity_checks, partial_sums, sina_exponential, tail_bound_spotcheck, tail_start
from .kato import (
    KATO_TIME,
    ensemble_coefficients,
    kato_sample_profile,
    kato_sample_rows,
    kato_sweep,
    order_weights,
    predicted_exponent,
    synthesize_kato_datum,
)
from .lambda4 import count_lambda4
from .optimality import counterexample_trace, lower_bound, operator_weights, optimality_run
from .trace_regularity import bookkeeping, rhs_indices, trace_regularity_r

__all__ = [
    "KATO_TIME",
    "bookkeeping",
    "closed_form",
    "count_lambda4",
    "counterexample_trace",
    "ensemble_coefficients",
    "identity_checks",
    "kato_sample_profile",
    "kato_sample_rows",
    "kato_sweep",
    "lower_bound",
    "operator_weights",
    "optimality_run",
    "order_weights",
    "partial_sums",
    "predicted_exponent",
    "rhs_indices",
    "sina_exponential",
    "synthesize_kato_datum",
    "tail_bound_spotcheck",
    "tail_start",
    "trace_regularity_r",
]
