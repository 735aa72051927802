import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from data_modals.pydantic_models.flow_modals import ClampedBasis
from data_modals.pydantic_models.spectral_modals import frozen_array


class BetaTable(BaseModel):
    """
    Closed-form boundary-integral coefficients for k = 1..N, stored as imaginary parts.

        navier0 = 2i (k pi)^3                navier2 = -2i k pi
        beta01  = -i (k pi)^3 - 6i k pi (cos k pi + 1)
        beta02  = 12i (k pi - 1)
        beta11  = -2i k pi (cos k pi + 2)
        beta12  = i (k pi)^2 + 6i (cos k pi - 1)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    k: np.ndarray
    navier0_im: np.ndarray
    navier2_im: np.ndarray
    beta01_im: np.ndarray
    beta02_im: np.ndarray
    beta11_im: np.ndarray
    beta12_im: np.ndarray

    @field_validator("k", mode="before")
    @classmethod
    def _coerce_k(cls, value):
        return frozen_array(value, dtype=np.int64)

    @field_validator("navier0_im", "navier2_im", "beta01_im", "beta02_im", "beta11_im", "beta12_im", mode="before")
    @classmethod
    def _coerce(cls, value):
        return frozen_array(value, dtype=float)

    @property
    def N(self) -> int:
        return int(self.k.size)

    @property
    def navier0(self) -> np.ndarray:
        return 1j * self.navier0_im

    @property
    def navier2(self) -> np.ndarray:
        return 1j * self.navier2_im

    @property
    def beta01(self) -> np.ndarray:
        return 1j * self.beta01_im

    @property
    def beta02(self) -> np.ndarray:
        return 1j * self.beta02_im

    @property
    def beta11(self) -> np.ndarray:
        return 1j * self.beta11_im

    @property
    def beta12(self) -> np.ndarray:
        return 1j * self.beta12_im

    @property
    def w0n_weights(self) -> np.ndarray:
        """Weights applied by W_{0,N}; u(0+, t) = h(t) fixes them to -navier0."""
        return -self.navier0

    @property
    def w2n_weights(self) -> np.ndarray:
        """Weights applied by W_{2,N}; u_xx(0+, t) = h(t) fixes them to -navier2."""
        return -self.navier2


class ClampedBoundaryField(BaseModel):
    """
    Dirichlet boundary response v = f + sum_k z_k(t) phi_k on a time grid.

    f(x,t) is the cubic lift with columns (h1, h3, h2, h4) of `lift`; phi_k are clamped
    modes, so v and v_x at x = 0, 1 come from the lift alone.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    lift: np.ndarray = Field(..., description="(J+1, 4) boundary data h1, h3, h2, h4 per node")
    z: np.ndarray = Field(..., description="(J+1, K) clamped-mode correction")
    basis: ClampedBasis

    @field_validator("times", mode="before")
    @classmethod
    def _coerce_times(cls, value):
        return frozen_array(value, dtype=float)

    @field_validator("lift", "z", mode="before")
    @classmethod
    def _coerce_rows(cls, value):
        return frozen_array(np.atleast_2d(value), dtype=complex)
