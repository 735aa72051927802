import numpy as np
from loguru import logger

from data_modals.pydantic_models.lab_modals import CounterexampleRun
from data_modals.pydantic_models.result_modals import OptimalityResult, OptimalityRow
from data_modals.pydantic_models.spectral_modals import PI4, BoundaryTrace
from services.boundary_ops import build_beta_table
from services.spectral_core import trace_sobolev_norm

MIN_SPATIAL_MODES = 512


def counterexample_trace(n: int, beta: float) -> BoundaryTrace:
    """h_n(t) = sum_{0<|k|<=n} |k|^(-beta) e^{i (k^4+1) pi^4 t}; k and -k share a lattice point."""
    k = np.arange(1, n + 1, dtype=np.int64)
    return BoundaryTrace.from_series(k ** 4 + 1, 2.0 * k.astype(float) ** (-beta), label=f"h_{n}")


def operator_weights(order: int, M: int) -> tuple[np.ndarray, np.ndarray]:
    """(sine, cosine) mode weights of the order-i boundary operator on modes 1..M."""
    table = build_beta_table(M)
    if order == 0:
        return table.w0n_weights, np.zeros(M, dtype=complex)
    if order == 1:
        return table.beta11, table.beta12
    return table.w2n_weights, np.zeros(M, dtype=complex)


def _solution_energy(h: BoundaryTrace, sine_w: np.ndarray, cosine_w: np.ndarray) -> float:
    """
    Time average over one period 2/pi^3 of the mean-square norm of the driven series.

    Mode m carries sum_j A_mj e^{i nu_j t} - B_m e^{i omega_m t} with
    A_mj = w_m a_j / (i (nu_j - omega_m)) and B_m = sum_j A_mj. Lattice points k^4 + 1 never
    meet m^4, so every exponential is orthogonal over the period.
    """
    M = sine_w.size
    nu = h.freqs.astype(float)
    omega = np.arange(1, M + 1, dtype=float) ** 4
    gaps = 1j * PI4 * (nu[None, :] - omega[:, None])
    base = h.coeffs[None, :] / gaps
    energy = 0.0
    for weights in (sine_w, cosine_w):
        if not np.any(weights):
            continue
        A = weights[:, None] * base
        B = A.sum(axis=1)
        energy += 0.5 * float(np.sum(np.abs(A) ** 2) + np.sum(np.abs(B) ** 2))
    return energy


def lower_bound(n: int, beta: float, sine_w: np.ndarray, cosine_w: np.ndarray) -> float:
    """sum_{k<=n} (|w_k^s|^2 + |w_k^c|^2) k^(-2 beta) / (2 pi^8); 2 pi^-2 sum k^(6-2 beta) at order 0."""
    k = np.arange(1, n + 1, dtype=float)
    weights = np.abs(sine_w[:n]) ** 2 + np.abs(cosine_w[:n]) ** 2
    return float(np.sum(0.5 * weights * k ** (-2.0 * beta)) / np.pi ** 8)


def optimality_run(cfg: CounterexampleRun) -> OptimalityResult:
    """
    Ratio of the driven solution norm to the H^alpha trace norm for growing n.

    Past the trace threshold the ratio grows without bound; control runs (alpha at or
    above (3-i)/4) check that it levels off instead.
    """
    n_grid = sorted(set(cfg.n_grid))
    M = cfg.spatial_modes or max(8 * n_grid[-1], MIN_SPATIAL_MODES)
    sine_w, cosine_w = operator_weights(cfg.order, M)
    label = "control" if cfg.is_control else "counterexample"
    logger.info(f"Optimality {label}: alpha={cfg.alpha:g}, beta={cfg.beta:g}, order {cfg.order}, {M} spatial modes")

    rows = []
    for n in n_grid:
        h = counterexample_trace(n, cfg.beta)
        energy = _solution_energy(h, sine_w, cosine_w)
        trace_norm = trace_sobolev_norm(h, cfg.alpha)
        bound = lower_bound(n, cfg.beta, sine_w, cosine_w)
        ratio = float(np.sqrt(energy)) / trace_norm
        rows.append(
            OptimalityRow(n=n, solution_norm=float(np.sqrt(energy)), trace_norm=trace_norm, ratio=ratio, lower_bound=bound, bound_holds=energy >= bound)
        )
        logger.debug(f"n={n}: ratio {ratio:.6f}, |u|^2 {energy:.6e} >= {bound:.6e}")

    reference = next((row for row in rows if row.n >= 4), rows[0])
    growth = rows[-1].ratio / reference.ratio
    last_doubling = rows[-1].ratio / rows[-2].ratio if len(rows) > 1 else 1.0
    logger.info(f"Optimality {label}: growth {growth:.4f}, last step {last_doubling:.4f}")
    return OptimalityResult(
        alpha=cfg.alpha,
        beta=cfg.beta,
        order=cfg.order,
        is_control=cfg.is_control,
        spatial_modes=M,
        rows=rows,
        growth=growth,
        last_doubling_growth=last_doubling,
    )
