import os
from typing import Callable

import numpy as np

from data_modals.pydantic_models.problem_modals import ProblemSpec, SolutionRecord
from data_modals.pydantic_models.result_modals import (
    IdentityResult,
    KatoSweepResult,
    Lambda4Result,
    OptimalityResult,
    TailBoundResult,
    TraceRegularityResult,
)
from services.spectral_core import sobolev_norm
from utils.emitters.writers import write_columns, write_csv, write_dat, write_models


class ArtifactSink:
    """Writes the enabled formats into one output directory and remembers the file names."""

    def __init__(self, out_dir: str, emit: list[str]):
        self.out_dir = out_dir
        self.emit = set(emit)
        self.paths: list[str] = []

    def _path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def table(self, name: str, writer: Callable[[str], str]) -> None:
        if "csv" in self.emit:
            self.paths.append(writer(self._path(name)))

    def plot(self, name: str, x, y, comment: str) -> None:
        if "dat" in self.emit:
            self.paths.append(write_dat(self._path(name), x, y, comment))


def emit_solution(sink: ArtifactSink, spec: ProblemSpec, record: SolutionRecord) -> None:
    times = record.times
    l2 = record.l2_history()
    hs = np.array([sobolev_norm(state, spec.s) for state in record.states])
    sink.table(
        "norms.csv",
        lambda path: write_columns(path, f"{spec.family} solution norms on [0,T*]", {"t": times, "l2": l2, "hs": hs}),
    )
    final = record.states[-1]
    k = np.arange(1, final.N + 1)
    sink.table(
        "coefficients.csv",
        lambda path: write_columns(path, f"mode coefficients at t={final.t!r}", {"k": k, "q": final.q, "p": final.p}),
    )
    if record.traces:
        columns = {"t": times}
        for name in record.traces:
            columns[f"{name}_recovered"] = np.asarray(record.traces[name], dtype=complex)
            columns[f"{name}_imposed"] = np.asarray(record.imposed[name], dtype=complex)
        sink.table("traces.csv", lambda path: write_columns(path, "boundary values: recovered vs imposed", columns))
    sink.plot("norms.dat", times, l2, "t  l2 norm")


def emit_kato(sink: ArtifactSink, result: KatoSweepResult) -> None:
    sink.table("kato_samples.csv", lambda path: write_models(path, "trace exponent vs (s+3-i)/4", result.rows))
    sink.table("kato_summary.csv", lambda path: write_models(path, "median trace exponent vs (s+3-i)/4", result.summary))
    usable = [row for row in result.summary if row.median is not None]
    sink.plot("kato.dat", [row.predicted for row in usable], [row.median for row in usable], "predicted  measured")


def emit_optimality(sink: ArtifactSink, result: OptimalityResult) -> None:
    anchor = f"solution/trace norm ratio, order {result.order}, alpha={result.alpha!r}, beta={result.beta!r}"
    sink.table("ratios.csv", lambda path: write_models(path, anchor, result.rows))
    sink.plot("ratios.dat", [row.n for row in result.rows], [row.ratio for row in result.rows], "n  ratio")


def emit_lambda4(sink: ArtifactSink, result: Lambda4Result) -> None:
    rows = sorted(result.histogram.items())
    anchor = f"bucket multiplicities of (k-l, k^4-l^4), |k|,|l| <= {result.K}, (0,0) excluded"
    sink.table("lambda4.csv", lambda path: write_csv(path, anchor, ["multiplicity", "buckets"], rows))
    sink.plot("lambda4.dat", [size for size, _ in rows], [count for _, count in rows], "multiplicity  buckets")


def emit_identities(sink: ArtifactSink, identities: IdentityResult, tail: TailBoundResult) -> None:
    sink.table("identities.csv", lambda path: write_models(path, "sine expansion partial sums vs closed form", identities.rows))
    sink.table("tail_bound.csv", lambda path: write_models(path, "Abel-summed tail vs x^(alpha-1)(1+lam^(1/4))^(alpha-1)", tail.points))
    sink.plot("identities.dat", [row.K for row in identities.rows], [row.envelope for row in identities.rows], "K  envelope")


def emit_traces(sink: ArtifactSink, result: TraceRegularityResult) -> None:
    sink.table("trace_regularity.csv", lambda path: write_models(path, "time-Sobolev norms of r1..r4 vs data norms", result.rows))
    sink.table("bookkeeping.csv", lambda path: write_models(path, "index inequalities; (s+10)/8 < s iff s > 10/7", result.bookkeeping))
    first = [row for row in result.rows if row.sample == 0 and row.trace == "r1"]
    sink.plot("trace_regularity.dat", [row.s for row in first], [row.constant for row in first], "s  constant for r1")
