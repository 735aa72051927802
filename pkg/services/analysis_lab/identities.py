import math

import numpy as np
from loguru import logger

from data_modals.pydantic_models.lab_modals import IdentityConfig, TailBoundConfig
from data_modals.pydantic_models.result_modals import (
    IdentityResult,
    IdentityRow,
    TailBoundResult,
    TailPoint,
)

SQRT_I = np.exp(1j * np.pi / 4)
ABEL_RADII = (1.0 - 2e-5, 1.0 - 4e-5)
ABEL_TOL = 1e-3
SLOPE_MARGIN = 0.2
JITTER = 1.10


def closed_form(a: float, x) -> np.ndarray:
    """(pi/2) sin(sqrt(i) a (pi - x)) / sin(sqrt(i) a pi), sqrt(i) = e^{i pi/4}."""
    z = SQRT_I * a
    return 0.5 * np.pi * np.sin(z * (np.pi - np.asarray(x))) / np.sin(z * np.pi)


def sina_exponential(a: float) -> complex:
    """sin(sqrt(i) a) from e^{i sqrt(i) a} = e^{-a/sqrt 2} e^{i a/sqrt 2}."""
    r = a / math.sqrt(2.0)
    return (math.exp(-r) * np.exp(1j * r) - math.exp(r) * np.exp(-1j * r)) / 2j


def partial_sums(a: float, x, K: int) -> np.ndarray:
    """S_K(x) = sum_{k<=K} (k^3 + i k a^2)/(k^4 + a^4) sin(kx) for K = 1..K, shape (K, len(x))."""
    k = np.arange(1, K + 1, dtype=float)
    terms = (k ** 3 + 1j * k * a * a) / (k ** 4 + a ** 4)
    return np.cumsum(terms[:, None] * np.sin(np.outer(k, np.atleast_1d(x))), axis=0)


def identity_checks(cfg: IdentityConfig | None = None) -> IdentityResult:
    """
    Partial sums of the sine expansion of (pi/2) sin(sqrt(i) a (pi - x)) / sin(sqrt(i) a pi).

    The envelope at K is the worst error over partial sums K..2K, which removes the
    cos((K + 1/2) x) beat of the 1/k tail; it must not grow by more than 10% per doubling.
    """
    cfg = cfg or IdentityConfig()
    K_grid = sorted(cfg.K_grid)
    x = np.asarray(cfg.x_grid, dtype=float)
    residual = np.zeros(len(K_grid))
    envelope = np.zeros(len(K_grid))
    for a in cfg.a_grid:
        errors = np.abs(partial_sums(a, x, 2 * K_grid[-1]) - closed_form(a, x))
        for i, K in enumerate(K_grid):
            residual[i] = max(residual[i], float(errors[K - 1].max()))
            envelope[i] = max(envelope[i], float(errors[K - 1 : 2 * K].max()))
    rows = [IdentityRow(K=K, residual=r, envelope=e) for K, r, e in zip(K_grid, residual, envelope)]
    monotone = all(b <= JITTER * a for a, b in zip(envelope, envelope[1:]))

    spot = float(abs(partial_sums(1.0, np.pi / 2, K_grid[-1])[-1, 0] - closed_form(1.0, np.pi / 2)))
    tiny = 1e-8
    sawtooth_gap = float(np.max(np.abs(closed_form(tiny, x) - (np.pi - x) / 2.0)))
    grid = np.linspace(0.05, 5.0, 100)
    sina = float(max(abs(np.sin(SQRT_I * a) - sina_exponential(a)) / max(1.0, abs(np.sin(SQRT_I * a))) for a in grid))
    logger.info(f"Identity checks: envelope {envelope.tolist()}, spot {spot:.2e}, sina {sina:.1e}")
    return IdentityResult(rows=rows, spot_residual=spot, sawtooth_gap=sawtooth_gap, sina_residual=sina, monotone=monotone)


def tail_start(lam: float) -> int:
    """First summation index: floor((2 lam)^(1/4)), pushed past the pole at lam^(1/4)."""
    c = lam ** 0.25
    return max(int(math.floor((2.0 * lam) ** 0.25)), int(math.floor(c)) + 1)


def tail_bound(x: float, lam: float, alpha: float) -> float:
    return x ** (alpha - 1.0) * (1.0 + lam ** 0.25) ** (alpha - 1.0)


def tail_bound_spotcheck(cfg: TailBoundConfig | None = None) -> TailBoundResult:
    """
    Abel-summed sum_{k>=k0} sin(k pi x)/(k - lam^(1/4)) on an (x, lam) grid.

    Two Abel radii are compared and disagreeing points are flagged. The fitted constant
    is max |S| / (x^(alpha-1) (1 + lam^(1/4))^(alpha-1)); the lambda trend is the log-log
    slope of max_x |S| x^(1-alpha), which must not exceed (alpha-1)/4 + 0.2.
    """
    cfg = cfg or TailBoundConfig()
    offsets = np.arange(cfg.terms, dtype=float)
    dampers = [r ** offsets for r in ABEL_RADII]
    points = []
    for lam in cfg.lam_grid:
        k0 = tail_start(lam)
        k = k0 + offsets
        inverse = 1.0 / (k - lam ** 0.25)
        for x in cfg.x_grid:
            terms = np.sin(np.pi * x * k) * inverse
            first, second = (float(np.dot(damper, terms)) for damper in dampers)
            gap = abs(first - second)
            flagged = (not math.isfinite(first)) or gap > ABEL_TOL * max(1.0, abs(first))
            if flagged:
                logger.warning(f"Abel sums disagree at x={x:g}, lam={lam:g}: gap {gap:.2e}")
            points.append(
                TailPoint(x=x, lam=lam, k0=k0, value=first, abel_gap=gap, bound=tail_bound(x, lam, cfg.alpha), flagged=flagged)
            )
    constant = max(abs(p.value) / p.bound for p in points)
    lams = np.array(sorted(set(cfg.lam_grid)))
    envelope = np.array(
        [max(abs(p.value) * p.x ** (1.0 - cfg.alpha) for p in points if p.lam == lam) for lam in lams]
    )
    if lams.size >= 2 and np.all(envelope > 0):
        slope = float(np.polyfit(np.log(lams), np.log(envelope), 1)[0])
    else:
        slope = float("nan")
    limit = (cfg.alpha - 1.0) / 4.0 + SLOPE_MARGIN
    logger.info(f"Tail bound: C={constant:.4f}, lambda slope {slope:.3f} (limit {limit:.3f})")
    return TailBoundResult(alpha=cfg.alpha, points=points, constant=constant, slope=slope, slope_limit=limit)
