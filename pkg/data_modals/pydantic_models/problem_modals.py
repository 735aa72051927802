import math
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, Field, model_validator

from data_modals.pydantic_models.spectral_modals import BoundaryTrace, FourierState
from services.exceptions import ConstraintError

Pair = Tuple[float, float]

HALF_INTEGER_TOL = 1e-12
DIRICHLET_THRESHOLD = 10.0 / 7.0
MAX_SPACE_INDEX = 4.5


class InitialData(BaseModel):
    """
    Declarative initial datum phi on [0,1].

    kinds:
        zero         phi = 0
        sine_modes   phi = sum_k c_k sin(k pi x)
        cosine_modes phi = constant + sum_k c_k cos(k pi x)
        polynomial   phi = sum_j poly[j] x^j
    Every value is multiplied by `scale`.
    """

    kind: Literal["zero", "sine_modes", "cosine_modes", "polynomial"] = "zero"
    modes: Dict[int, Pair] = Field(default_factory=dict, description="mode k -> (re, im)")
    constant: Pair = (0.0, 0.0)
    poly: List[float] = Field(default_factory=list, description="monomial coefficients, lowest degree first")
    scale: float = 1.0

    @model_validator(mode="after")
    def _check(self):
        if any(k < 1 for k in self.modes):
            raise ValueError("mode indices start at 1")
        if self.kind == "polynomial" and not self.poly:
            raise ValueError("polynomial initial data needs coefficients")
        return self

    def _mode_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ks = np.array(sorted(self.modes), dtype=float)
        cs = np.array([complex(*self.modes[int(k)]) for k in ks], dtype=complex)
        return ks, cs

    def evaluate(self, x, derivative: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            return np.zeros(x.shape, dtype=complex)
        if self.kind == "polynomial":
            coef = P.polyder(np.asarray(self.poly, dtype=float), derivative) if derivative else np.asarray(self.poly)
            return self.scale * P.polyval(x, coef).astype(complex)
        ks, cs = self._mode_arrays()
        phase = np.multiply.outer(x, ks * np.pi) + derivative * np.pi / 2
        # d^n sin(a x) = a^n sin(a x + n pi/2); likewise for cos
        basis = np.sin(phase) if self.kind == "sine_modes" else np.cos(phase)
        values = basis @ (cs * (ks * np.pi) ** derivative) if ks.size else np.zeros(x.shape, dtype=complex)
        if self.kind == "cosine_modes" and derivative == 0:
            values = values + complex(*self.constant)
        return self.scale * values

    def __call__(self, x) -> np.ndarray:
        return self.evaluate(x)

    def exact_sine_state(self, N: int) -> Optional[FourierState]:
        """Exact sine state for sine_modes data within the truncation, else None."""
        if self.kind == "zero":
            return FourierState.zeros("sine", N)
        if self.kind != "sine_modes" or any(k > N for k in self.modes):
            return None
        q = np.zeros(N, dtype=complex)
        for k, pair in self.modes.items():
            q[k - 1] = self.scale * complex(*pair)
        return FourierState.sine(q)


class TraceSpec(BaseModel):
    """
    Declarative boundary signal.

    kinds:
        zero     h = 0
        series   h(t) = sum_n a_n exp(i n pi^4 t)
        samples  piecewise-linear through (times, values); with fit_lattice > 0 a
                 least-squares series on n = 0..fit_lattice is attached as well
    """

    kind: Literal["zero", "series", "samples"] = "zero"
    terms: Dict[int, Pair] = Field(default_factory=dict, description="lattice index n -> (re, im)")
    times: List[float] = Field(default_factory=list)
    values: List[Pair] = Field(default_factory=list)
    scale: float = 1.0
    fit_lattice: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "samples":
            if len(self.times) < 2 or len(self.times) != len(self.values):
                raise ValueError("sampled traces need matching times and values (at least two)")
        return self

    def build(self, label: str) -> BoundaryTrace:
        if self.kind == "zero":
            return BoundaryTrace.zero(label)
        if self.kind == "series":
            freqs = np.array(list(self.terms), dtype=np.int64)
            coeffs = np.array([complex(*pair) for pair in self.terms.values()], dtype=complex)
            return BoundaryTrace.from_series(freqs, self.scale * coeffs, label=label)
        values = np.array([complex(*pair) for pair in self.values], dtype=complex)
        if self.fit_lattice:
            return BoundaryTrace.from_samples(self.times, self.scale * values, self.fit_lattice, label=label)
        return BoundaryTrace(sample_times=self.times, sample_values=self.scale * values, label=label)


class ProblemSpec(BaseModel):
    """
    One initial-boundary-value problem i u_t + u_xxxx + lam |u|^(p-2) u = 0 on (0,1).

    Navier data: h1 = u(0), h2 = u(1), h5 = u_xx(0), h6 = u_xx(1).
    Dirichlet data: h1 = u(0), h2 = u(1), h3 = u_x(0), h4 = u_x(1).
    """

    family: Literal["navier", "dirichlet"] = "navier"
    s: float = 1.0
    p: float = 3.0
    lam: float = Field(1.0, description="real coupling lambda")
    T: float = Field(0.01, gt=0)
    initial: InitialData = Field(default_factory=InitialData)
    h1: TraceSpec = Field(default_factory=TraceSpec)
    h2: TraceSpec = Field(default_factory=TraceSpec)
    h3: TraceSpec = Field(default_factory=TraceSpec)
    h4: TraceSpec = Field(default_factory=TraceSpec)
    h5: TraceSpec = Field(default_factory=TraceSpec)
    h6: TraceSpec = Field(default_factory=TraceSpec)
    N: int = Field(128, ge=1)
    dt: float = Field(1e-4, gt=0)
    tol: float = Field(1e-8, gt=0)
    max_iter: int = Field(20, ge=1)
    dealias: float = Field(1.0, ge=1.0)
    compatibility: bool = True
    dirichlet_boundary: Literal["clamped", "periodic"] = "clamped"
    clamped_modes: Optional[int] = Field(None, ge=1)
    projection_tol: float = Field(0.5, gt=0)
    low_regularity_experiment: bool = False

    @model_validator(mode="after")
    def _constraints(self):
        if self.p < 3:
            raise ConstraintError(f"p={self.p} rejected: the nonlinearity needs p >= 3", "p>=3")
        frac = self.s - math.floor(self.s)
        if abs(frac - 0.5) < HALF_INTEGER_TOL:
            raise ConstraintError(f"s={self.s:g} excluded: s ≠ n+1/2", "s!=n+1/2")
        if self.s > MAX_SPACE_INDEX:
            raise ConstraintError(f"s={self.s:g} outside the working range s <= 9/2", "s<=9/2")
        if self.family == "navier":
            if self.s <= 0.5 and not self.low_regularity_experiment:
                raise ConstraintError(f"Navier requires s > 1/2 (got s={self.s:g})", "navier:s>1/2")
            if self.s < 0:
                raise ConstraintError("s must be non-negative", "s>=0")
        elif self.s <= DIRICHLET_THRESHOLD:
            raise ConstraintError(f"Dirichlet requires s > 10/7 (got s={self.s:g})", "dirichlet:s>10/7")
        if self.family == "dirichlet" and self.dirichlet_boundary != "clamped":
            raise ConstraintError(
                "the mixed sine/cosine boundary series does not reach u(0,t) = h1(t); use the clamped realization",
                "dirichlet_boundary=clamped",
            )
        even_integer_p = float(self.p).is_integer() and int(self.p) % 2 == 0
        if self.s >= 1 and not even_integer_p and math.floor(self.s) > self.p - 2:
            raise ConstraintError(
                f"floor(s)={math.floor(self.s)} exceeds p-2={self.p - 2:g}: |u|^(p-2)u is not smooth enough",
                "floor(s)<=p-2",
            )
        if self.dt > self.T:
            raise ConstraintError(f"dt={self.dt:g} exceeds the horizon T={self.T:g}", "dt<=T")
        return self

    def traces(self) -> dict[str, BoundaryTrace]:
        names = ("h1", "h2", "h5", "h6") if self.family == "navier" else ("h1", "h2", "h3", "h4")
        return {name: getattr(self, name).build(name) for name in names}

    @property
    def modes_clamped(self) -> int:
        return self.clamped_modes or self.N


class SolveDiagnostics(BaseModel):
    family: str
    metric: Literal["Hs", "L4"] = "Hs"
    converged: bool = False
    iterations: int = 0
    distances: List[float] = Field(default_factory=list)
    contraction_factors: List[float] = Field(default_factory=list)
    t_star: float = 0.0
    halvings: int = 0
    fixed_point_residual: float = 0.0
    mode_residual: float = 0.0
    projection_residual: float = 0.0
    data_norm: float = 0.0
    boundary_mismatch: Dict[str, float] = Field(default_factory=dict)
    compatibility_ok: bool = True


class SolutionRecord(BaseModel):
    """Time-stamped states, boundary values u(0,t), u(1,t), ... and diagnostics."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    times: np.ndarray
    states: List[FourierState]
    traces: Dict[str, np.ndarray] = Field(default_factory=dict, description="reconstructed boundary values per time")
    imposed: Dict[str, np.ndarray] = Field(default_factory=dict, description="imposed boundary data per time")
    diagnostics: SolveDiagnostics

    @model_validator(mode="after")
    def _check(self):
        if len(self.states) != self.times.size:
            raise ValueError("one state per time node")
        if self.times.size and (self.times[0] < 0 or self.times[-1] > self.diagnostics.t_star + 1e-12):
            raise ValueError("record times must lie in [0, T*]")
        return self

    def l2_history(self) -> np.ndarray:
        return np.array([state.l2_norm() for state in self.states])


class Homogenization(BaseModel):
    """
    Stationary cubic gamma matching the Navier corner data at t = 0.

    gamma = a(1-x) + b x + e((1-x)^3 - (1-x))/6 + f(x^3 - x)/6, so gamma(0) = a,
    gamma(1) = b, gamma''(0) = e, gamma''(1) = f.
    """

    a: complex = 0j
    b: complex = 0j
    e: complex = 0j
    f: complex = 0j

    def _polynomials(self, derivative: int):
        one_minus_x = P.Polynomial([1.0, -1.0])
        x = P.Polynomial([0.0, 1.0])
        shapes = (one_minus_x, x, (one_minus_x ** 3 - one_minus_x) / 6.0, (x ** 3 - x) / 6.0)
        return [shape.deriv(derivative) for shape in shapes]

    def evaluate(self, x, derivative: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        corners = (self.a, self.b, self.e, self.f)
        return sum(c * shape(x) for c, shape in zip(corners, self._polynomials(derivative))) + 0j * x

    def __call__(self, x) -> np.ndarray:
        return self.evaluate(x)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.e == 0 and self.f == 0
