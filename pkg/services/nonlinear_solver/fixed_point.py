import math
from abc import ABC, abstractmethod
from typing import List, NamedTuple

import numpy as np
from loguru import logger

from data_modals.pydantic_models.problem_modals import ProblemSpec
from services.exceptions import BlowUpCandidateError, CompatibilityError, NoConvergenceError

CORNER_TOL = 1e-8
RESOLVED_PHASE = 0.1
DIVERGENCE_RUN = 3


class PicardOutcome(NamedTuple):
    times: np.ndarray
    iterate: np.ndarray
    linear: np.ndarray
    distances: List[float]
    factors: List[float]
    converged: bool


def time_grid(t_star: float, dt: float) -> np.ndarray:
    """Uniform nodes on [0, t_star] with step at most dt."""
    J = max(1, int(math.ceil(t_star / dt - 1e-9)))
    return np.linspace(0.0, t_star, J + 1)


def check_corners(pairs: dict[str, tuple[complex, complex]], enforce: bool) -> bool:
    """
    Compare initial-data corners with boundary data at t = 0.

    Args:
        pairs: name -> (value from phi, value from the trace)
        enforce: raise CompatibilityError instead of warning

    Returns:
        bool: True when every corner matches within CORNER_TOL
    """
    bad = {name: abs(a - b) for name, (a, b) in pairs.items() if abs(a - b) > CORNER_TOL}
    if not bad:
        return True
    details = {name: f"{gap:.3e}" for name, gap in bad.items()}
    if enforce:
        raise CompatibilityError("initial data and boundary data disagree at the corners", details)
    logger.warning(f"Corner compatibility violated ({details}); output marked incompatible")
    return False


def time_l2(values: np.ndarray, times: np.ndarray) -> float:
    return float(np.sqrt(np.trapezoid(np.abs(values) ** 2, times)))


def mode_residual(coeffs: np.ndarray, times: np.ndarray, omega: np.ndarray, rhs: np.ndarray) -> float:
    """
    max |i c_k' + omega_k c_k + rhs_k| over time-resolved modes at interior nodes.

    rhs collects the nonlinear and boundary-forcing terms so that the mode ODE reads
    i c' + omega c + rhs = 0. Derivatives are second-order central differences.
    """
    if times.size < 3:
        return 0.0
    resolved = omega * (times[1] - times[0]) < RESOLVED_PHASE
    if not np.any(resolved):
        return 0.0
    derivative = np.gradient(coeffs[:, resolved], times, axis=0)
    residual = 1j * derivative + omega[resolved] * coeffs[:, resolved] + rhs[:, resolved]
    return float(np.max(np.abs(residual[1:-1])))


class AdaptivePicard(ABC):
    """
    Picard iteration v -> Gamma(v) on a uniform time grid with adaptive existence time.

    Subclasses provide the linear part, one application of Gamma and the iteration metric.
    T* starts at min(T, 1) and halves whenever the iterates fail to contract within
    max_iter steps; once T* falls below dt the solve gives up with NoConvergenceError.

    Methods:
        solve() -> PicardOutcome: iterate until convergence, halving T* as needed.
    """

    family: str = "navier"

    def __init__(self, spec: ProblemSpec, data_norm: float):
        self.spec = spec
        self.data_norm = data_norm
        self.halvings = 0
        self.t_star = min(spec.T, 1.0)

    @abstractmethod
    def linear_part(self, times: np.ndarray) -> np.ndarray:
        """Iterate-independent part of Gamma on the grid."""

    @abstractmethod
    def apply(self, iterate: np.ndarray, times: np.ndarray, linear: np.ndarray) -> np.ndarray:
        """One application of Gamma."""

    @abstractmethod
    def distance(self, difference: np.ndarray, times: np.ndarray) -> float:
        """Sup-in-time norm of the difference of two iterates."""

    def _iterate(self, times: np.ndarray) -> PicardOutcome:
        spec = self.spec
        linear = self.linear_part(times)
        current = linear
        distances: List[float] = []
        factors: List[float] = []
        for m in range(1, spec.max_iter + 1):
            try:
                following = self.apply(current, times, linear)
            except BlowUpCandidateError as exc:
                logger.warning(f"Picard {m}/{spec.max_iter} ({self.family}): {exc}")
                return PicardOutcome(times, current, linear, distances, factors, False)
            gap = self.distance(following - current, times)
            if not math.isfinite(gap):
                logger.warning(f"Picard {m}/{spec.max_iter} ({self.family}): non-finite distance")
                return PicardOutcome(times, current, linear, distances, factors, False)
            if distances:
                factors.append(gap / distances[-1] if distances[-1] > 0 else 0.0)
            distances.append(gap)
            current = following
            logger.info(f"Picard {m}/{spec.max_iter} ({self.family}): distance {gap:.3e} on T*={times[-1]:.3e}")
            if gap < spec.tol:
                return PicardOutcome(times, current, linear, distances, factors, True)
            if len(factors) >= DIVERGENCE_RUN and all(f > 1.0 for f in factors[-DIVERGENCE_RUN:]):
                logger.warning(f"Iterates diverging on T*={times[-1]:.3e}")
                break
        return PicardOutcome(times, current, linear, distances, factors, False)

    def solve(self) -> PicardOutcome:
        while True:
            if self.t_star < self.spec.dt * (1.0 - 1e-9):
                logger.error(f"T* underflow for {self.family} data of norm {self.data_norm:.3e}")
                raise NoConvergenceError("Picard iteration did not contract before T* fell below dt", self.data_norm, self.t_star)
            outcome = self._iterate(time_grid(self.t_star, self.spec.dt))
            if outcome.converged:
                return outcome
            self.t_star /= 2.0
            self.halvings += 1
            logger.warning(f"No contraction; halving T* to {self.t_star:.3e}")

    def fixed_point_residual(self, outcome: PicardOutcome) -> float:
        following = self.apply(outcome.iterate, outcome.times, outcome.linear)
        return self.distance(following - outcome.iterate, outcome.times)
