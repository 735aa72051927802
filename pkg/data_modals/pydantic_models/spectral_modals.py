from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Basis = Literal["sine", "cosine", "mixed"]

# Boundary traces live on the lattice n*pi^4; one period is 2/pi^3.
PI4 = np.pi ** 4
TRACE_PERIOD = 2.0 / np.pi ** 3


def frozen_array(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


class FourierState(BaseModel):
    """
    Mode coefficients of u(., t) on (0,1).

    reconstruct(x) = p0 + sum_k p_k cos(k pi x) + sum_k q_k sin(k pi x), k = 1..N.
    Sine states carry no cosine part, cosine states carry no sine part.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    basis: Basis
    q: np.ndarray = Field(..., description="sine coefficients q_1..q_N")
    p: np.ndarray = Field(..., description="cosine coefficients p_1..p_N")
    p0: complex = Field(0j, description="constant cosine mode")
    t: float = Field(0.0, description="time stamp")

    @field_validator("q", "p", mode="before")
    @classmethod
    def _coerce(cls, value):
        arr = np.atleast_1d(np.asarray(value, dtype=complex))
        if arr.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        return frozen_array(arr)

    @model_validator(mode="after")
    def _check(self):
        if self.q.shape != self.p.shape:
            raise ValueError(f"q and p lengths differ: {self.q.shape} vs {self.p.shape}")
        if self.q.size < 1:
            raise ValueError("N must be at least 1")
        if not (np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.p)) and np.isfinite(self.p0)):
            raise ValueError("coefficients must be finite")
        if self.basis == "sine" and (np.any(self.p != 0) or self.p0 != 0):
            raise ValueError("sine state carries a cosine part")
        if self.basis == "cosine" and np.any(self.q != 0):
            raise ValueError("cosine state carries a sine part")
        return self

    @property
    def N(self) -> int:
        return int(self.q.size)

    @classmethod
    def sine(cls, q, t: float = 0.0) -> "FourierState":
        q = np.asarray(q, dtype=complex)
        return cls(basis="sine", q=q, p=np.zeros_like(q), t=t)

    @classmethod
    def cosine(cls, p, p0: complex = 0j, t: float = 0.0) -> "FourierState":
        p = np.asarray(p, dtype=complex)
        return cls(basis="cosine", q=np.zeros_like(p), p=p, p0=complex(p0), t=t)

    @classmethod
    def mixed(cls, q, p, p0: complex = 0j, t: float = 0.0) -> "FourierState":
        return cls(basis="mixed", q=q, p=p, p0=complex(p0), t=t)

    @classmethod
    def zeros(cls, basis: Basis, N: int, t: float = 0.0) -> "FourierState":
        zero = np.zeros(N, dtype=complex)
        return cls(basis=basis, q=zero, p=zero, t=t)

    def evolve(self, q=None, p=None, p0=None, t=None) -> "FourierState":
        return FourierState(
            basis=self.basis,
            q=self.q if q is None else q,
            p=self.p if p is None else p,
            p0=self.p0 if p0 is None else complex(p0),
            t=self.t if t is None else t,
        )

    def l2_norm(self) -> float:
        """Mean-square norm of the 2-periodic extension; the L2(0,1) norm for pure sine or cosine states."""
        total = abs(self.p0) ** 2 + 0.5 * float(np.sum(np.abs(self.q) ** 2 + np.abs(self.p) ** 2))
        return float(np.sqrt(total))

    def _combined_basis(self, other: "FourierState") -> Basis:
        return self.basis if self.basis == other.basis else "mixed"

    def __add__(self, other: "FourierState") -> "FourierState":
        if self.N != other.N:
            raise ValueError(f"truncation mismatch: {self.N} vs {other.N}")
        return FourierState(
            basis=self._combined_basis(other),
            q=self.q + other.q,
            p=self.p + other.p,
            p0=self.p0 + other.p0,
            t=self.t,
        )

    def __sub__(self, other: "FourierState") -> "FourierState":
        return self + other.scaled(-1.0)

    def scaled(self, factor: complex) -> "FourierState":
        return self.evolve(q=self.q * factor, p=self.p * factor, p0=self.p0 * factor)


class SobolevIndex(BaseModel):
    s: float
    domain: Literal["space", "time"] = "space"

    @model_validator(mode="after")
    def _range(self):
        if self.s < 0:
            raise ValueError("Sobolev index must be non-negative")
        if self.domain == "space" and self.s > 4.5:
            raise ValueError(f"space index s={self.s} outside the working range [0, 9/2]")
        return self


class BoundaryTrace(BaseModel):
    """
    A boundary signal h(t) = sum_n a_n exp(i n pi^4 t), optionally with dense samples.

    The series lives on integer lattice indices `freqs`; the sampled form is the one the
    piecewise-linear Duhamel weights consume.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    freqs: Optional[np.ndarray] = None
    coeffs: Optional[np.ndarray] = None
    sample_times: Optional[np.ndarray] = None
    sample_values: Optional[np.ndarray] = None
    label: str = "h"

    @field_validator("freqs", mode="before")
    @classmethod
    def _coerce_freqs(cls, value):
        if value is None:
            return None
        return frozen_array(np.atleast_1d(value), dtype=np.int64)

    @field_validator("coeffs", "sample_values", mode="before")
    @classmethod
    def _coerce_complex(cls, value):
        if value is None:
            return None
        return frozen_array(np.atleast_1d(value), dtype=complex)

    @field_validator("sample_times", mode="before")
    @classmethod
    def _coerce_times(cls, value):
        if value is None:
            return None
        return frozen_array(np.atleast_1d(value), dtype=float)

    @model_validator(mode="after")
    def _check(self):
        if (self.freqs is None) != (self.coeffs is None):
            raise ValueError("series form needs both freqs and coeffs")
        if self.freqs is not None:
            if self.freqs.shape != self.coeffs.shape:
                raise ValueError("freqs and coeffs lengths differ")
            if np.unique(self.freqs).size != self.freqs.size:
                raise ValueError("duplicate lattice frequencies")
            if not np.all(np.isfinite(self.coeffs)):
                raise ValueError("series coefficients must be finite")
        if (self.sample_times is None) != (self.sample_values is None):
            raise ValueError("sampled form needs both times and values")
        if self.sample_times is not None:
            if self.sample_times.shape != self.sample_values.shape:
                raise ValueError("sample times and values lengths differ")
            if self.sample_times.size < 2 or np.any(np.diff(self.sample_times) <= 0):
                raise ValueError("sample times must be strictly increasing")
            if not np.all(np.isfinite(self.sample_values)):
                raise ValueError("sample values must be finite")
        return self

    @property
    def has_series(self) -> bool:
        return self.freqs is not None

    @property
    def has_samples(self) -> bool:
        return self.sample_times is not None

    @property
    def M(self) -> int:
        if not self.has_series or self.freqs.size == 0:
            return 0
        return int(np.max(np.abs(self.freqs)))

    @classmethod
    def zero(cls, label: str = "h") -> "BoundaryTrace":
        return cls(freqs=np.zeros(0, dtype=np.int64), coeffs=np.zeros(0, dtype=complex), label=label)

    @classmethod
    def from_series(cls, freqs, coeffs, label: str = "h") -> "BoundaryTrace":
        """Build a series trace, merging repeated lattice frequencies."""
        freqs = np.asarray(freqs, dtype=np.int64).ravel()
        coeffs = np.asarray(coeffs, dtype=complex).ravel()
        unique, inverse = np.unique(freqs, return_inverse=True)
        merged = np.zeros(unique.size, dtype=complex)
        np.add.at(merged, inverse, coeffs)
        return cls(freqs=unique, coeffs=merged, label=label)

    @classmethod
    def from_samples(cls, times, values, max_n: int, label: str = "h") -> "BoundaryTrace":
        """
        Least-squares series on the lattice n = 0..max_n through the samples; the samples are kept.

        The fit is only determined when the samples span a good part of one period 2/pi^3.
        """
        times = np.asarray(times, dtype=float).ravel()
        values = np.asarray(values, dtype=complex).ravel()
        freqs = np.arange(max_n + 1, dtype=np.int64)
        design = np.exp(1j * np.multiply.outer(times, freqs.astype(float) * PI4))
        coeffs, *_ = np.linalg.lstsq(design, values, rcond=None)
        return cls(freqs=freqs, coeffs=coeffs, sample_times=times, sample_values=values, label=label)

    def evaluate(self, t) -> np.ndarray:
        """Series value at t (falls back to the samples when there is no series)."""
        t = np.asarray(t, dtype=float)
        if self.has_series:
            phase = np.multiply.outer(t, self.freqs.astype(float) * PI4)
            return np.exp(1j * phase) @ self.coeffs
        if self.has_samples:
            return self._interpolate(t)
        raise ValueError(f"trace {self.label} has neither series nor samples")

    def _interpolate(self, t: np.ndarray) -> np.ndarray:
        re = np.interp(t, self.sample_times, self.sample_values.real)
        im = np.interp(t, self.sample_times, self.sample_values.imag)
        return re + 1j * im

    def sample(self, times) -> np.ndarray:
        """Values on a time grid, preferring the sampled form where it covers the grid."""
        times = np.asarray(times, dtype=float)
        if self.has_samples and times.size:
            covered = times.min() >= self.sample_times[0] - 1e-12 and times.max() <= self.sample_times[-1] + 1e-12
            if covered or not self.has_series:
                return self._interpolate(times)
        return self.evaluate(times)

    def is_zero(self) -> bool:
        series_zero = (not self.has_series) or not np.any(self.coeffs != 0)
        samples_zero = (not self.has_samples) or not np.any(self.sample_values != 0)
        return series_zero and samples_zero

    def shifted(self, constant: complex) -> "BoundaryTrace":
        """h - constant, applied to every form present."""
        freqs = coeffs = times = values = None
        if self.has_series:
            merged = BoundaryTrace.from_series(
                np.concatenate([self.freqs, [0]]), np.concatenate([self.coeffs, [-constant]])
            )
            freqs, coeffs = merged.freqs, merged.coeffs
        if self.has_samples:
            times, values = self.sample_times, self.sample_values - constant
        return BoundaryTrace(freqs=freqs, coeffs=coeffs, sample_times=times, sample_values=values, label=self.label)

    def scaled(self, factor: complex) -> "BoundaryTrace":
        return BoundaryTrace(
            freqs=self.freqs,
            coeffs=None if self.coeffs is None else self.coeffs * factor,
            sample_times=self.sample_times,
            sample_values=None if self.sample_values is None else self.sample_values * factor,
            label=self.label,
        )

    def __neg__(self) -> "BoundaryTrace":
        return self.scaled(-1.0)

    def __add__(self, other: "BoundaryTrace") -> "BoundaryTrace":
        freqs = coeffs = times = values = None
        if self.has_series and other.has_series:
            merged = BoundaryTrace.from_series(
                np.concatenate([self.freqs, other.freqs]), np.concatenate([self.coeffs, other.coeffs])
            )
            freqs, coeffs = merged.freqs, merged.coeffs
        if self.has_samples or other.has_samples:
            base = self if self.has_samples else other
            times = base.sample_times
            values = self.sample(times) + other.sample(times)
        if freqs is None and times is None:
            raise ValueError("cannot combine traces without a common form")
        return BoundaryTrace(freqs=freqs, coeffs=coeffs, sample_times=times, sample_values=values, label=self.label)

    def __sub__(self, other: "BoundaryTrace") -> "BoundaryTrace":
        return self + (-other)
