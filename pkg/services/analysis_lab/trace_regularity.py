import numpy as np
from loguru import logger

from data_modals.pydantic_models.lab_modals import TraceRegularityConfig
from data_modals.pydantic_models.result_modals import BookkeepingRow, TraceRegularityResult, TraceRow
from data_modals.pydantic_models.spectral_modals import FourierState
from services.boundary_ops import traces_from_extension
from services.spectral_core import odd_even_extend, sobolev_norm_rows, trace_sobolev_norm

DIRICHLET_THRESHOLD = 10.0 / 7.0


def rhs_indices(s: float, eps: float) -> tuple[float, float]:
    """
    Space indices bounding the traces at time regularity s.

    (even part for r1, r2; odd part for r3, r4): ((s+eps)/2, (s+eps)/2 + 1) for s <= 1,
    (4(s+eps) - 7/2, 4(s+eps) - 5/2) for 1 < s <= 2.
    """
    if s <= 1.0:
        low = 0.5 * (s + eps)
        return low, low + 1.0
    return 4.0 * (s + eps) - 3.5, 4.0 * (s + eps) - 2.5


def _even_norm(phi_e: FourierState, index: float) -> float:
    return float(sobolev_norm_rows(phi_e.p, index, p0=np.array([phi_e.p0]))[0])


def _odd_norm(phi_o: FourierState, index: float) -> float:
    return float(sobolev_norm_rows(phi_o.q, index)[0])


def bookkeeping(s_values) -> list[BookkeepingRow]:
    """Index inequalities that close the Dirichlet fixed-point argument."""
    return [
        BookkeepingRow(
            s=float(s),
            first=(s + 3.0) / 8.0 < s,
            second=s - 0.5 < s,
            third=(s + 10.0) / 8.0 < s,
            above_threshold=s > DIRICHLET_THRESHOLD,
        )
        for s in s_values
    ]


def trace_regularity_r(cfg: TraceRegularityConfig | None = None) -> TraceRegularityResult:
    """
    Time-Sobolev norms of r1..r4 against Sobolev norms of the even/odd halves of phi.

    Constants are lhs / rhs (0 when both vanish). Norms above 9/2 are evaluated on the
    truncated coefficients directly.
    """
    cfg = cfg or TraceRegularityConfig()
    rows = []
    for sample, phi in enumerate(cfg.ensemble):
        phi_o, phi_e = odd_even_extend(phi, cfg.N)
        traces = traces_from_extension(phi_o, phi_e)
        for s in cfg.s_grid:
            even_index, odd_index = rhs_indices(s, cfg.eps)
            for trace in traces:
                lhs = trace_sobolev_norm(trace, s)
                if trace.label in ("r1", "r2"):
                    index, rhs = even_index, _even_norm(phi_e, even_index)
                else:
                    index, rhs = odd_index, _odd_norm(phi_o, odd_index)
                if rhs > 0:
                    constant = lhs / rhs
                else:
                    constant = 0.0 if lhs == 0 else float("inf")
                rows.append(TraceRow(sample=sample, s=s, trace=trace.label, lhs=lhs, rhs_index=index, rhs=rhs, constant=constant))
        logger.info(f"Trace regularity sample {sample}: max constant {max(r.constant for r in rows if r.sample == sample):.4e}")
    dense = np.linspace(0.05, 4.5, 90)
    checks = bookkeeping(np.concatenate([np.asarray(cfg.s_grid, dtype=float), dense]))
    return TraceRegularityResult(rows=rows, bookkeeping=checks)
