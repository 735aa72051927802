import numpy as np
from loguru import logger
from scipy.optimize import brentq, newton

from data_modals.pydantic_models.flow_modals import ClampedBasis
from services.exceptions import InputError, RootBracketError
from services.spectral_core import gauss_legendre

ROOT_TOL = 1e-12
GRAM_TOL = 1e-8


def _sech(mu):
    e = np.exp(-mu)
    return 2.0 * e / (1.0 + e * e)


def characteristic(mu):
    """cos(mu) - 1/cosh(mu); its positive zeros are the clamped-clamped values mu_k."""
    return np.cos(mu) - _sech(mu)


def _characteristic_prime(mu):
    return -np.sin(mu) + _sech(mu) * np.tanh(mu)


def clamped_root(k: int) -> float:
    """k-th positive root of cos(mu) cosh(mu) = 1, bracketed in [k pi + 0.1, (k+1) pi - 0.1]."""
    lo, hi = k * np.pi + 0.1, (k + 1) * np.pi - 0.1
    f_lo, f_hi = characteristic(lo), characteristic(hi)
    if f_lo * f_hi > 0:
        raise RootBracketError(f"no sign change while bracketing clamped root {k}", k)
    root = brentq(characteristic, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    try:
        root = float(newton(characteristic, root, fprime=_characteristic_prime, tol=1e-15, maxiter=8))
    except RuntimeError:
        logger.debug(f"Newton polish stalled for root {k}; keeping the bracketed value")
    if not lo <= root <= hi or abs(characteristic(root)) > ROOT_TOL:
        raise RootBracketError(f"clamped root {k} failed to polish (residual {characteristic(root):.2e})", k)
    return root


def build_clamped_basis(K: int, quadrature_nodes: int | None = None) -> ClampedBasis:
    """
    First K clamped-clamped eigenfunctions, L2(0,1)-normalized.

    Args:
        K: number of modes
        quadrature_nodes: Gauss-Legendre nodes used for normalization and projection,
            defaults to max(8K, 256)

    Returns:
        ClampedBasis
    """
    if K < 1:
        raise InputError("K must be at least 1")
    mu = np.array([clamped_root(k) for k in range(1, K + 1)])
    e_mu = np.exp(-mu)
    D = 1.0 - e_mu * e_mu - 2.0 * np.sin(mu) * e_mu
    A = (np.cos(mu) - np.sin(mu) - e_mu) / D
    one_minus_sigma = 2.0 * e_mu * A
    sigma = 1.0 - one_minus_sigma
    B = (1.0 + sigma) / 2.0

    nodes, weights = gauss_legendre(quadrature_nodes or max(8 * K, 256))
    raw = ClampedBasis(mu=mu, A=A, B=B, sigma=sigma, scale=np.ones(K), nodes=nodes, weights=weights)
    modes = raw.evaluate_modes(nodes)
    norms = np.sqrt(weights @ modes ** 2)
    fields = dict(mu=mu, A=A, B=B, sigma=sigma, scale=1.0 / norms, nodes=nodes, weights=weights)
    basis = ClampedBasis(**fields)
    gram_error = float(np.max(np.abs(basis.gram() - np.eye(K))))
    if gram_error > GRAM_TOL:
        logger.warning(f"Clamped basis Gram defect {gram_error:.2e} exceeds {GRAM_TOL:.0e} for K={K}")
    logger.debug(f"Clamped basis K={K}: mu_1={mu[0]:.10f}, mu_K={mu[-1]:.4f}, gram defect {gram_error:.2e}")
    return ClampedBasis(**fields, gram_error=gram_error)
