from typing import Callable, NamedTuple, Union

import numpy as np
from loguru import logger
from scipy.fft import dct, dst

from data_modals.pydantic_models.spectral_modals import BoundaryTrace, FourierState, SobolevIndex
from services.exceptions import InputError

RealSpace = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


def uniform_grid(M: int) -> np.ndarray:
    """M+1 equispaced points x_j = j/M on [0,1]."""
    return np.linspace(0.0, 1.0, M + 1)


def _grid_size(N: int, points: int | None) -> int:
    M = max(4 * N, 2 * N + 1) if points is None else int(points) - 1
    if M < N + 1:
        raise InputError(f"transform grid of {M + 1} points cannot resolve {N} modes", {"N": N})
    return M


def _samples(func: RealSpace, M: int) -> np.ndarray:
    if callable(func):
        values = np.asarray(func(uniform_grid(M)), dtype=complex)
        values = np.broadcast_to(values, (M + 1,)).copy()
    else:
        values = np.asarray(func, dtype=complex).ravel()
        if values.size != M + 1:
            raise InputError("sample count does not match the transform grid", {"expected": M + 1, "got": values.size})
    if not np.all(np.isfinite(values)):
        raise InputError("non-finite samples rejected")
    return values


def _trapezoid_sine(values: np.ndarray, N: int) -> np.ndarray:
    """integral_0^1 g sin(k pi x) dx by the composite trapezoid rule (DST-I on the interior)."""
    M = values.size - 1
    interior = values[1:-1]
    full = dst(interior.real, type=1) + 1j * dst(interior.imag, type=1)
    # DST-I: y_{k-1} = 2 sum_j g_j sin(k pi j / M)
    return full[:N] / (2.0 * M)


def _trapezoid_cosine(values: np.ndarray, N: int) -> tuple[complex, np.ndarray]:
    """(integral g, integral g cos(k pi x) for k=1..N) by the composite trapezoid rule (DCT-I)."""
    M = values.size - 1
    full = dct(values.real, type=1) + 1j * dct(values.imag, type=1)
    integrals = full / (2.0 * M)
    padded = np.zeros(N + 1, dtype=complex)
    count = min(N + 1, integrals.size)
    padded[:count] = integrals[:count]
    return complex(padded[0]), padded[1:]


def sine_coefficients(func: RealSpace, N: int, points: int | None = None, t: float = 0.0) -> FourierState:
    """
    Sine coefficients q_k = 2 int_0^1 phi sin(k pi x) dx, k = 1..N.

    Args:
        func: callable on [0,1] or samples on the uniform grid of `points` nodes (endpoints included)
        N: truncation order
        points: grid size; defaults to 4N+1

    Returns:
        FourierState: sine state stamped with t
    """
    if N < 1:
        raise InputError("N must be at least 1")
    if points is None and not callable(func):
        points = np.asarray(func).size
    M = _grid_size(N, points)
    values = _samples(func, M)
    return FourierState.sine(2.0 * _trapezoid_sine(values, N), t=t)


def odd_even_extend(func: RealSpace, N: int, points: int | None = None, t: float = 0.0) -> tuple[FourierState, FourierState]:
    """
    Split phi into half its odd and half its even 2-periodic extension.

    q_k = int_0^1 phi sin, p_k = int_0^1 phi cos, p0 = (1/2) int_0^1 phi, so that
    reconstruct(phi_o) + reconstruct(phi_e) = phi on (0,1).
    """
    if N < 1:
        raise InputError("N must be at least 1")
    if points is None and not callable(func):
        points = np.asarray(func).size
    M = _grid_size(N, points)
    values = _samples(func, M)
    q = _trapezoid_sine(values, N)
    mean, p = _trapezoid_cosine(values, N)
    return FourierState.sine(q, t=t), FourierState.cosine(p, p0=0.5 * mean, t=t)


def quadrature_extend(values: np.ndarray, nodes: np.ndarray, weights: np.ndarray, N: int, t: float = 0.0) -> FourierState:
    """Mixed state of samples on arbitrary quadrature nodes, same conventions as odd_even_extend."""
    values = np.asarray(values, dtype=complex)
    k_pi = np.pi * np.arange(1, N + 1)
    q = (np.sin(np.outer(k_pi, nodes)) * weights) @ values
    p = (np.cos(np.outer(k_pi, nodes)) * weights) @ values
    p0 = 0.5 * np.dot(weights, values)
    return FourierState.mixed(q, p, p0=p0, t=t)


def sobolev_weights(N: int, s: float) -> np.ndarray:
    return (1.0 + (np.pi * np.arange(1, N + 1)) ** 2) ** s


def sobolev_norm(state: FourierState, idx: SobolevIndex | float) -> float:
    """( |p0|^2 + sum_k (1+(k pi)^2)^s (|q_k|^2 + |p_k|^2) )^(1/2)."""
    if not isinstance(idx, SobolevIndex):
        idx = SobolevIndex(s=float(idx))
    if idx.domain != "space":
        raise InputError("sobolev_norm expects a space index")
    weights = sobolev_weights(state.N, idx.s)
    total = abs(state.p0) ** 2 + float(np.sum(weights * (np.abs(state.q) ** 2 + np.abs(state.p) ** 2)))
    return float(np.sqrt(total))


def sobolev_norm_rows(q: np.ndarray, s: float, p: np.ndarray | None = None, p0: np.ndarray | None = None) -> np.ndarray:
    """The same norm for a stack of coefficient rows (time x modes)."""
    q = np.atleast_2d(q)
    weights = sobolev_weights(q.shape[-1], s)
    energy = np.sum(weights * np.abs(q) ** 2, axis=-1)
    if p is not None:
        energy = energy + np.sum(weights * np.abs(np.atleast_2d(p)) ** 2, axis=-1)
    if p0 is not None:
        energy = energy + np.abs(p0) ** 2
    return np.sqrt(energy)


def trace_sobolev_norm(h: BoundaryTrace, alpha: float) -> float:
    """( sum_n (1+n^2)^alpha |a_n|^2 )^(1/2) on the series form."""
    if not h.has_series:
        raise InputError(f"trace {h.label} has no series form", {"alpha": alpha})
    if alpha < 0:
        raise InputError("time Sobolev index must be non-negative")
    n = h.freqs.astype(float)
    weights = (1.0 + n * n) ** alpha
    return float(np.sqrt(np.sum(weights * np.abs(h.coeffs) ** 2)))


def reconstruct(state: FourierState, grid) -> np.ndarray:
    """p0 + sum p_k cos(k pi x) + sum q_k sin(k pi x) at each grid point."""
    x = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any((x < 0.0) | (x > 1.0)):
        raise InputError("grid points must lie in [0,1]")
    k_pi = np.pi * np.arange(1, state.N + 1)
    phase = np.outer(x, k_pi)
    values = np.full(x.shape, state.p0, dtype=complex)
    if state.basis != "cosine":
        values = values + np.sin(phase) @ state.q
    if state.basis != "sine":
        values = values + np.cos(phase) @ state.p
    return values


def reconstruct_sine_rows(q: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Sine series for a stack of coefficient rows, shape (rows, len(grid))."""
    k_pi = np.pi * np.arange(1, q.shape[-1] + 1)
    return np.atleast_2d(q) @ np.sin(np.outer(k_pi, grid))


def critical_exponent(freqs: np.ndarray, amplitudes: np.ndarray, head: int = 16, min_points: int = 8) -> dict:
    """
    Largest exponent a with sum (1+n^2)^a |c_n|^2 finite, fitted from the tail.

    Regresses log|c_n|^2 and the cumulative lattice count against log|n| over the
    points beyond the first `head` nonzero frequencies; the exponent is
    -(amplitude slope + density slope)/2.

    Returns:
        dict with keys exponent, r2, flagged, trivial, points
    """
    n = np.abs(np.asarray(freqs, dtype=float))
    a2 = np.abs(np.asarray(amplitudes, dtype=complex)) ** 2
    mask = (n > 0) & (a2 > 0)
    n, a2 = n[mask], a2[mask]
    order = np.argsort(n, kind="stable")
    n, a2 = n[order], a2[order]
    if n.size < 2:
        return {"exponent": float("inf"), "r2": 1.0, "flagged": False, "trivial": True, "points": int(n.size)}
    rank = np.arange(1, n.size + 1, dtype=float)
    start = head if n.size - head >= min_points else n.size // 4
    tail = slice(start, None)
    log_n = np.log(n[tail])
    if log_n.size < 2 or np.ptp(log_n) == 0:
        return {"exponent": float("nan"), "r2": 0.0, "flagged": True, "trivial": False, "points": int(log_n.size)}
    amp_slope, amp_icpt = np.polyfit(log_n, np.log(a2[tail]), 1)
    density_slope = np.polyfit(log_n, np.log(rank[tail]), 1)[0]
    fitted = amp_slope * log_n + amp_icpt
    residual = np.log(a2[tail]) - fitted
    spread = np.log(a2[tail]) - np.log(a2[tail]).mean()
    total = float(np.sum(spread ** 2))
    r2 = 1.0 - float(np.sum(residual ** 2)) / total if total > 0 else 1.0
    exponent = -(amp_slope + density_slope) / 2.0
    flagged = (not np.isfinite(exponent)) or r2 < 0.8
    if flagged:
        logger.debug(f"Tail fit flagged: r2={r2:.3f}, exponent={exponent}")
    return {"exponent": float(exponent), "r2": r2, "flagged": bool(flagged), "trivial": False, "points": int(log_n.size)}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Legendre nodes and weights on [0,1]."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return 0.5 * (nodes + 1.0), 0.5 * weights


class BoundaryLimits(NamedTuple):
    u0: np.ndarray
    u1: np.ndarray
    uxx0: np.ndarray
    uxx1: np.ndarray
    residual: np.ndarray


def sine_boundary_limits(coeffs, fit_from: float = 0.5) -> BoundaryLimits:
    """
    One-sided limits u(0+), u(1-), u''(0+), u''(1-) of a sine series.

    For piecewise-smooth u, (k pi / 2) q_k = u(0) - (-1)^k u(1) - (u''(0) - (-1)^k u''(1)) / (k pi)^2 + O(k^-4).
    Even and odd k are fitted separately by least squares over k in [fit_from N, N].

    Args:
        coeffs: FourierState or array of rows (times x N)
        fit_from: lower end of the fitted band as a fraction of N
    """
    q = coeffs.q if isinstance(coeffs, FourierState) else np.asarray(coeffs, dtype=complex)
    rows = np.atleast_2d(q)
    N = rows.shape[-1]
    k = np.arange(max(1, int(fit_from * N)), N + 1)
    if np.count_nonzero(k % 2 == 0) < 2 or np.count_nonzero(k % 2 == 1) < 2:
        raise InputError("too few modes to fit boundary limits", {"N": N})
    scaled = rows[:, k - 1] * (k * np.pi / 2.0)
    fits, residual = {}, np.zeros(rows.shape[0])
    for parity in (0, 1):
        sel = k % 2 == parity
        design = np.column_stack([np.ones(sel.sum()), -1.0 / (k[sel] * np.pi) ** 2])
        solution, *_ = np.linalg.lstsq(design, scaled[:, sel].T, rcond=None)
        fits[parity] = solution
        misfit = scaled[:, sel].T - design @ solution
        residual = np.maximum(residual, np.sqrt(np.mean(np.abs(misfit) ** 2, axis=0)))
    even, odd = fits[0], fits[1]
    u0 = 0.5 * (even[0] + odd[0])
    u1 = 0.5 * (odd[0] - even[0])
    uxx0 = 0.5 * (even[1] + odd[1])
    uxx1 = 0.5 * (odd[1] - even[1])
    return BoundaryLimits(u0, u1, uxx0, uxx1, residual)


class SeriesBoundaryValues(NamedTuple):
    u0: complex
    u1: complex
    ux0: complex
    ux1: complex
    converged: bool


def series_boundary_values(state: FourierState, rtol: float = 1e-6) -> SeriesBoundaryValues:
    """
    Term-by-term u(0), u(1), u_x(0), u_x(1) of a state's series.

    Partial sums over the last quarter of the spectrum must settle within rtol,
    otherwise the values are returned with converged=False.
    """
    k = np.arange(1, state.N + 1)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    k_pi = np.pi * k
    terms = np.vstack([
        state.p,
        sign * state.p,
        k_pi * state.q,
        sign * k_pi * state.q,
    ])
    partial = np.cumsum(terms, axis=1)
    totals = partial[:, -1] + np.array([state.p0, state.p0, 0.0, 0.0])
    cut = max(0, (3 * state.N) // 4 - 1)
    drift = np.abs(partial[:, -1] - partial[:, cut])
    converged = bool(np.all(drift <= rtol * (1.0 + np.abs(totals))))
    if not converged:
        logger.debug(f"Boundary partial sums still moving: max drift {drift.max():.3e}")
    return SeriesBoundaryValues(*(complex(v) for v in totals), converged)
