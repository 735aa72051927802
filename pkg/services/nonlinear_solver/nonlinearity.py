import math
from typing import Callable, Optional

import numpy as np
from scipy.fft import dct, dst

from data_modals.pydantic_models.spectral_modals import FourierState
from services.exceptions import BlowUpCandidateError, InputError
from services.spectral_core import gauss_legendre, quadrature_extend, reconstruct

Offset = Optional[Callable[[np.ndarray], np.ndarray]]


def _dst1(values: np.ndarray) -> np.ndarray:
    return dst(values.real, type=1, axis=-1) + 1j * dst(values.imag, type=1, axis=-1)


def _dct1(values: np.ndarray) -> np.ndarray:
    return dct(values.real, type=1, axis=-1) + 1j * dct(values.imag, type=1, axis=-1)


def pointwise_power(u: np.ndarray, p: float, lam: float) -> np.ndarray:
    """lam |u|^(p-2) u with the principal real power of |u|; zeros stay zero."""
    values = lam * np.abs(u) ** (p - 2.0) * u
    if not np.all(np.isfinite(values)):
        raise BlowUpCandidateError("non-finite values in |u|^(p-2)u", {"max|u|": f"{np.nanmax(np.abs(u)):.3e}"})
    return values


def padded_points(N: int, p: float, dealias: float) -> int:
    """Interior collocation points for the sine transform; even integer p is alias-free."""
    return max(N + 1, int(math.ceil(dealias * p * N / 2.0)))


def nonlinearity_sine_rows(rows: np.ndarray, p: float, lam: float, dealias: float = 1.0, offset: Offset = None) -> np.ndarray:
    """
    Sine coefficients of lam |u + offset|^(p-2) (u + offset) for a stack of sine rows.

    u is synthesized by DST-I on L interior points x_j = j/(L+1) and projected back the same way.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=complex))
    N = rows.shape[-1]
    L = padded_points(N, p, dealias)
    padded = np.zeros(rows.shape[:-1] + (L,), dtype=complex)
    padded[..., :N] = rows
    u = _dst1(padded) / 2.0
    if offset is not None:
        x = np.arange(1, L + 1) / (L + 1.0)
        u = u + offset(x)
    g = pointwise_power(u, p, lam)
    return _dst1(g)[..., :N] / (L + 1.0)


def nonlinearity_cosine_rows(p_rows: np.ndarray, p0: np.ndarray, p: float, lam: float, dealias: float = 1.0):
    """Cosine coefficients (p0, p_k) of lam |u|^(p-2) u through DCT-I on L+1 points x_j = j/L."""
    p_rows = np.atleast_2d(np.asarray(p_rows, dtype=complex))
    p0 = np.atleast_1d(np.asarray(p0, dtype=complex))
    N = p_rows.shape[-1]
    L = padded_points(N, p, dealias) + 1
    padded = np.zeros(p_rows.shape[:-1] + (L + 1,), dtype=complex)
    padded[..., 0] = p0
    padded[..., 1 : N + 1] = p_rows / 2.0
    u = _dct1(padded)
    y = _dct1(pointwise_power(u, p, lam))
    return y[..., 0] / (2.0 * L), y[..., 1 : N + 1] / L


def nonlinearity(state: FourierState, p: float, lam: float, dealias: float = 1.0, offset: Offset = None) -> FourierState:
    """
    lam |u|^(p-2) u evaluated pseudo-spectrally and projected back in the state's basis.

    Sine and cosine states use padded DST-I/DCT-I grids (exact for even integer p);
    mixed states use Gauss-Legendre collocation with the odd/even projection.
    """
    if p < 3:
        raise InputError("the nonlinearity needs p >= 3", {"p": p})
    if state.basis == "sine":
        q = nonlinearity_sine_rows(state.q, p, lam, dealias, offset)[0]
        return FourierState.sine(q, t=state.t)
    if state.basis == "cosine" and offset is None:
        p0, pk = nonlinearity_cosine_rows(state.p, state.p0, p, lam, dealias)
        return FourierState.cosine(pk[0], p0=p0[0], t=state.t)
    nodes, weights = gauss_legendre(int(math.ceil(dealias * max(4 * state.N, 64))))
    u = reconstruct(state, nodes)
    if offset is not None:
        u = u + offset(nodes)
    return quadrature_extend(pointwise_power(u, p, lam), nodes, weights, state.N, t=state.t)
