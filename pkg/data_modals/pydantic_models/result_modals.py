from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class Lambda4Result(BaseModel):
    """Pair-difference buckets (k - l, k^4 - l^4) over k, l in [-K, K]."""

    K: int
    max_multiplicity: int = Field(..., description="largest bucket other than (0, 0)")
    histogram: Dict[int, int] = Field(default_factory=dict, description="bucket size -> number of buckets")
    diagonal: int = Field(..., description="size of the excluded (0, 0) bucket, 2K+1")
    wide_integers: bool = False

    @property
    def passed(self) -> bool:
        return self.max_multiplicity <= 3


class KatoRow(BaseModel):
    s: float
    order: int
    sample: int
    exponent: float = Field(..., description="critical exponent of the boundary datum")
    spatial_exponent: float = Field(..., description="critical exponent of the profile the datum drives")
    implied: float = Field(..., description="(spatial_exponent + 3 - order)/4")
    predicted: float
    r2: float
    flagged: bool = False
    trivial: bool = False


class KatoSummaryRow(BaseModel):
    s: float
    order: int
    median: Optional[float]
    predicted: float
    deviation: Optional[float]
    gap: Optional[float] = Field(None, description="median |exponent - implied|")
    samples_used: int
    within: bool


class KatoSweepResult(BaseModel):
    rows: List[KatoRow]
    summary: List[KatoSummaryRow]
    monotone_in_order: bool
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.monotone_in_order and all(row.within for row in self.summary)


class OptimalityRow(BaseModel):
    n: int
    solution_norm: float = Field(..., description="time-averaged L2 norm of the driven solution over one trace period")
    trace_norm: float
    ratio: float
    lower_bound: float = Field(..., description="lower bound for the squared solution norm")
    bound_holds: bool


class OptimalityResult(BaseModel):
    alpha: float
    beta: float
    order: int
    is_control: bool
    spatial_modes: int
    rows: List[OptimalityRow]
    growth: float = Field(..., description="ratio at the largest n over ratio at the first n >= 4")
    last_doubling_growth: float

    @property
    def monotone(self) -> bool:
        ratios = [row.ratio for row in self.rows]
        return all(b >= a for a, b in zip(ratios, ratios[1:]))

    @property
    def passed(self) -> bool:
        if not all(row.bound_holds for row in self.rows):
            return False
        if self.is_control:
            return self.last_doubling_growth <= 1.05
        return self.monotone


class IdentityRow(BaseModel):
    K: int
    residual: float = Field(..., description="max over the (a, x) grid of the partial-sum error at K")
    envelope: float = Field(..., description="worst error over partial sums K..2K")


class IdentityResult(BaseModel):
    rows: List[IdentityRow]
    spot_residual: float = Field(..., description="a=1, x=pi/2 residual at the largest K")
    sawtooth_gap: float = Field(..., description="closed form at a -> 0 vs (pi - x)/2")
    sina_residual: float
    monotone: bool

    @property
    def passed(self) -> bool:
        return self.monotone and self.sina_residual < 1e-12 and self.sawtooth_gap < 1e-6


class TailPoint(BaseModel):
    x: float
    lam: float
    k0: int
    value: float
    abel_gap: float
    bound: float
    flagged: bool = False


class TailBoundResult(BaseModel):
    alpha: float
    points: List[TailPoint]
    constant: float
    slope: float = Field(..., description="log-log slope in lambda of max_x |S| x^(1-alpha)")
    slope_limit: float

    @property
    def passed(self) -> bool:
        finite = all(abs(p.value) < float("inf") for p in self.points)
        return finite and not any(p.flagged for p in self.points) and self.slope <= self.slope_limit


class TraceRow(BaseModel):
    sample: int
    s: float
    trace: str
    lhs: float
    rhs_index: float
    rhs: float
    constant: float


class BookkeepingRow(BaseModel):
    s: float
    first: bool = Field(..., description="(s+3)/8 < s")
    second: bool = Field(..., description="s - 1/2 < s")
    third: bool = Field(..., description="(s+10)/8 < s")
    above_threshold: bool = Field(..., description="s > 10/7")


class TraceRegularityResult(BaseModel):
    rows: List[TraceRow]
    bookkeeping: List[BookkeepingRow]

    @property
    def passed(self) -> bool:
        finite = all(row.constant < float("inf") for row in self.rows)
        consistent = all(row.third == row.above_threshold for row in self.bookkeeping)
        return finite and consistent
