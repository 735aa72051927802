from typing import List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from data_modals.pydantic_models.spectral_modals import FourierState, frozen_array


class ForcingHistory(BaseModel):
    """
    Mode coefficients of a forcing f(., t_j) on a strictly increasing time grid.

    Between nodes the forcing is linear in time.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    values: np.ndarray = Field(..., description="(J+1, modes) coefficients; sine part for sine/clamped grids")
    cosine: np.ndarray | None = Field(None, description="(J+1, modes) cosine part for periodic histories")
    constant: np.ndarray | None = Field(None, description="(J+1,) constant mode for periodic histories")
    kind: Literal["sine", "cosine", "mixed", "clamped"] = "sine"

    @field_validator("times", mode="before")
    @classmethod
    def _coerce_times(cls, value):
        return frozen_array(np.atleast_1d(value), dtype=float)

    @field_validator("values", "cosine", mode="before")
    @classmethod
    def _coerce_values(cls, value):
        if value is None:
            return None
        return frozen_array(np.atleast_2d(value), dtype=complex)

    @field_validator("constant", mode="before")
    @classmethod
    def _coerce_constant(cls, value):
        if value is None:
            return None
        return frozen_array(np.atleast_1d(value), dtype=complex)

    @model_validator(mode="after")
    def _check(self):
        if self.times.size < 2 or np.any(np.diff(self.times) <= 0):
            raise ValueError("forcing grid must be strictly increasing with at least two nodes")
        if self.values.shape[0] != self.times.size:
            raise ValueError("one coefficient row per time node")
        if self.cosine is not None and self.cosine.shape != self.values.shape:
            raise ValueError("sine and cosine parts must share a shape")
        if self.constant is not None and self.constant.shape != self.times.shape:
            raise ValueError("one constant mode per time node")
        return self

    @property
    def modes(self) -> int:
        return int(self.values.shape[1])

    @classmethod
    def from_states(cls, times, states: List[FourierState]) -> "ForcingHistory":
        bases = {state.basis for state in states}
        if len(bases) != 1 or len({state.N for state in states}) != 1:
            raise ValueError("forcing states must share basis and truncation")
        basis = bases.pop()
        sine = np.array([state.q for state in states])
        if basis == "sine":
            return cls(times=times, values=sine, kind="sine")
        return cls(
            times=times,
            values=sine,
            cosine=np.array([state.p for state in states]),
            constant=np.array([state.p0 for state in states]),
            kind=basis,
        )

    @classmethod
    def clamped(cls, times, coeffs) -> "ForcingHistory":
        return cls(times=times, values=coeffs, kind="clamped")


class ClampedBasis(BaseModel):
    """
    Orthonormal eigenfunctions of d^4/dx^4 with u = u' = 0 at x = 0 and x = 1.

    phi_k(x) = scale_k (A_k e^{mu_k (x-1)} + B_k e^{-mu_k x} - cos(mu_k x) + sigma_k sin(mu_k x)),
    which is cosh - cos - sigma (sinh - sin) rewritten without growing exponentials.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mu: np.ndarray
    A: np.ndarray
    B: np.ndarray
    sigma: np.ndarray
    scale: np.ndarray
    nodes: np.ndarray = Field(..., description="Gauss-Legendre nodes on [0,1] used for projection")
    weights: np.ndarray
    gram_error: float = 0.0

    @field_validator("mu", "A", "B", "sigma", "scale", "nodes", "weights", mode="before")
    @classmethod
    def _coerce(cls, value):
        return frozen_array(np.atleast_1d(value), dtype=float)

    @property
    def K(self) -> int:
        return int(self.mu.size)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.mu ** 4

    def evaluate_modes(self, x, derivative: int = 0) -> np.ndarray:
        """phi_k^(n)(x) for every mode, shape (len(x), K)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))[:, None]
        mu = self.mu[None, :]
        shift = derivative * np.pi / 2
        values = (
            self.A * mu ** derivative * np.exp(mu * (x - 1.0))
            + self.B * (-mu) ** derivative * np.exp(-mu * x)
            - mu ** derivative * np.cos(mu * x + shift)
            + self.sigma * mu ** derivative * np.sin(mu * x + shift)
        )
        return values * self.scale

    def evaluate(self, coeffs, x, derivative: int = 0) -> np.ndarray:
        """sum_k c_k phi_k^(n)(x); coeffs may be a stack of rows."""
        return np.asarray(coeffs) @ self.evaluate_modes(x, derivative).T

    def project(self, func) -> np.ndarray:
        """L2(0,1) coefficients <f, phi_k> by Gauss-Legendre quadrature; func is callable or node samples."""
        values = func(self.nodes) if callable(func) else np.asarray(func)
        return (self.evaluate_modes(self.nodes) * self.weights[:, None]).T @ values

    def gram(self) -> np.ndarray:
        modes = self.evaluate_modes(self.nodes)
        return (modes * self.weights[:, None]).T @ modes
