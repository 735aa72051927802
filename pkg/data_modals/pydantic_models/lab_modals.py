from typing import List, Literal

from pydantic import BaseModel, Field, model_validator

from data_modals.pydantic_models.problem_modals import InitialData
from services.exceptions import ConstraintError


class RegularitySweep(BaseModel):
    """Randomized ensembles q_k = k^(-s-1/2-eps) * unit phase, one per s, traced at orders 0, 1, 2."""

    s_grid: List[float] = Field(default_factory=lambda: [1.0, 2.0, 3.0])
    orders: List[Literal[0, 1, 2]] = Field(default_factory=lambda: [0, 1, 2])
    eps: float = Field(0.1, gt=0)
    ensemble: int = Field(16, ge=8)
    modes: int = Field(512, ge=64)
    tolerance: float = Field(0.15, gt=0)


class CounterexampleRun(BaseModel):
    """
    Boundary data h_n(t) = sum_{0<|k|<=n} |k|^(-beta) exp(i (k^4+1) pi^4 t) driving the
    order-`order` boundary operator.
    """

    alpha: float = Field(0.6, gt=0)
    beta: float = 3.4
    order: Literal[0, 1, 2] = 0
    n_grid: List[int] = Field(default_factory=lambda: [1, 2, 4, 8, 16, 32, 64])
    spatial_modes: int = Field(0, ge=0, description="0 selects max(8 n_max, 512)")

    @property
    def trace_threshold(self) -> float:
        return (1.0 + 8.0 * self.alpha) / 2.0

    @property
    def divergence_threshold(self) -> float:
        return (7.0 - 2.0 * self.order) / 2.0

    @property
    def is_control(self) -> bool:
        """alpha at or past (3-i)/4: the operator is bounded, so the run checks boundedness."""
        return self.alpha >= (3.0 - self.order) / 4.0

    @model_validator(mode="after")
    def _interval(self):
        if any(n < 1 for n in self.n_grid) or not self.n_grid:
            raise ValueError("n_grid needs positive entries")
        if self.beta <= self.trace_threshold:
            raise ConstraintError(
                f"beta={self.beta:g} must exceed (1+8 alpha)/2={self.trace_threshold:g} for a finite trace norm",
                "beta>(1+8alpha)/2",
            )
        if not self.is_control and self.beta >= self.divergence_threshold:
            raise ConstraintError(
                f"beta={self.beta:g} must stay below (7-2i)/2={self.divergence_threshold:g}",
                "beta<(7-2i)/2",
            )
        return self


class Lambda4Config(BaseModel):
    K: int = Field(200, ge=2)


class IdentityConfig(BaseModel):
    a_grid: List[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0, 3.5, 5.0])
    x_grid: List[float] = Field(default_factory=lambda: [0.3, 0.9, 1.5707963267948966, 2.2, 2.8])
    K_grid: List[int] = Field(default_factory=lambda: [625, 1250, 2500, 5000, 10000])

    @model_validator(mode="after")
    def _ranges(self):
        if any(a <= 0 or a > 5 for a in self.a_grid):
            raise ValueError("a must lie in (0, 5]")
        if any(x <= 0 or x >= 3.141592653589793 for x in self.x_grid):
            raise ValueError("x must lie in (0, pi)")
        return self


class TailBoundConfig(BaseModel):
    alpha: float = 0.9
    x_grid: List[float] = Field(default_factory=lambda: [0.1, 0.25, 0.5, 0.75, 0.95])
    lam_grid: List[float] = Field(default_factory=lambda: [16.0, 81.0, 256.0, 1296.0, 4096.0, 10000.0])
    terms: int = Field(1_500_000, ge=1000)

    @model_validator(mode="after")
    def _ranges(self):
        if not 0.75 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (3/4, 1)")
        if any(x <= 0 or x >= 1 for x in self.x_grid):
            raise ValueError("x must lie in (0, 1)")
        if any(lam <= 0 for lam in self.lam_grid):
            raise ValueError("lambda must be positive")
        return self


class TraceRegularityConfig(BaseModel):
    s_grid: List[float] = Field(default_factory=lambda: [0.25, 0.5, 0.75, 1.0, 1.5, 2.0])
    eps: float = Field(0.1, gt=0)
    N: int = Field(128, ge=4)
    ensemble: List[InitialData] = Field(
        default_factory=lambda: [InitialData(kind="polynomial", poly=[0.0, 0.0, 1.0, -2.0, 1.0])]
    )

    @model_validator(mode="after")
    def _ranges(self):
        if any(s <= 0 or s > 2 for s in self.s_grid):
            raise ValueError("trace regularity is measured for s in (0, 2]")
        return self
