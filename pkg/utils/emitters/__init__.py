from .tables import (
    ArtifactSink,
    emit_identities,
    emit_kato,
    emit_lambda4,
    emit_optimality,
    emit_solution,
    emit_traces,
)
from .writers import ensure_out_dir, split_complex, write_columns, write_csv, write_dat, write_json, write_models

__all__ = [
    "ArtifactSink",
    "emit_identities",
    "emit_kato",
    "emit_lambda4",
    "emit_optimality",
    "emit_solution",
    "emit_traces",
    "ensure_out_dir",
    "split_complex",
    "write_columns",
    "write_csv",
    "write_dat",
    "write_json",
    "write_models",
]
