import os
import time
from datetime import datetime

from loguru import logger

from celery_app import celery_app
from data_modals.pydantic_models.config_modals import RunConfig
from data_modals.pydantic_models.lab_modals import RegularitySweep
from data_modals.pydantic_models.response_modals import RunSummary
from services.analysis_lab import (
    count_lambda4,
    identity_checks,
    kato_sample_rows,
    kato_sweep,
    optimality_run,
    tail_bound_spotcheck,
    trace_regularity_r,
)
from services.exceptions import BihnsError
from services.nonlinear_solver import solve_problem
from utils.config import settings
from utils.emitters import (
    ArtifactSink,
    emit_identities,
    emit_kato,
    emit_lambda4,
    emit_optimality,
    emit_solution,
    emit_traces,
    ensure_out_dir,
    write_json,
)

BOUNDARY_TOL = 1e-6
RESIDUAL_FACTOR = 10.0


def _solve(cfg: RunConfig, sink: ArtifactSink) -> tuple[dict, dict]:
    spec = cfg.problem
    record = solve_problem(spec)
    emit_solution(sink, spec, record)
    diag = record.diagnostics
    checks = {
        "converged": diag.converged,
        "fixed_point_residual": diag.fixed_point_residual <= RESIDUAL_FACTOR * spec.tol,
        "compatibility": diag.compatibility_ok,
        "finite": bool(all(abs(value) < float("inf") for value in record.l2_history())),
    }
    if spec.family == "dirichlet" and diag.boundary_mismatch:
        checks["boundary_values"] = max(diag.boundary_mismatch.values()) <= BOUNDARY_TOL
    return checks, diag.model_dump(mode="json")


def _kato(cfg: RunConfig, sink: ArtifactSink) -> tuple[dict, dict]:
    result = kato_sweep(cfg.sweep, cfg.seed)
    emit_kato(sink, result)
    checks = {
        "exponents_within_tolerance": all(row.within for row in result.summary),
        "monotone_in_order": result.monotone_in_order,
    }
    diagnostics = {
        "tolerance": result.tolerance,
        "flagged_samples": sum(row.flagged for row in result.rows),
        "worst_deviation": max((row.deviation for row in result.summary if row.deviation is not None), default=None),
        "worst_gap": max((row.gap for row in result.summary if row.gap is not None), default=None),
    }
    return checks, diagnostics


def _optimality(cfg: RunConfig, sink: ArtifactSink) -> tuple[dict, dict]:
    result = optimality_run(cfg.counterexample)
    emit_optimality(sink, result)
    checks = {"lower_bound_holds": all(row.bound_holds for row in result.rows)}
    if result.is_control:
        checks["ratio_levels_off"] = result.last_doubling_growth <= 1.05
    else:
        checks["ratio_monotone"] = result.monotone
    diagnostics = {
        "growth": result.growth,
        "last_doubling_growth": result.last_doubling_growth,
        "spatial_modes": result.spatial_modes,
        "control": result.is_control,
    }
    return checks, diagnostics


def _lambda4(cfg: RunConfig, sink: ArtifactSink) -> tuple[dict, dict]:
    result = count_lambda4(cfg.lambda4.K)
    emit_lambda4(sink, result)
    diagnostics = {"K": result.K, "max_multiplicity": result.max_multiplicity, "diagonal": result.diagonal}
    return {"multiplicity_at_most_3": result.passed}, diagnostics


def _identities(cfg: RunConfig, sink: ArtifactSink) -> tuple[dict, dict]:
    identities = identity_checks(cfg.identities)
    tail = tail_bound_spotcheck(cfg.tail)
    emit_identities(sink, identities, tail)
    checks = {
        "partial_sums_monotone": identities.monotone,
        "sina_exponential": identities.sina_residual < 1e-12,
        "sawtooth_limit": identities.sawtooth_gap < 1e-6,
        "tail_finite": not any(point.flagged for point in tail.points),
        "tail_lambda_decay": tail.slope <= tail.slope_limit,
    }
    diagnostics = {
        "spot_residual": identities.spot_residual,
        "sina_residual": identities.sina_residual,
        "sawtooth_gap": identities.sawtooth_gap,
        "tail_constant": tail.constant,
        "tail_slope": tail.slope,
        "tail_slope_limit": tail.slope_limit,
    }
    return checks, diagnostics


def _traces(cfg: RunConfig, sink: ArtifactSink) -> tuple[dict, dict]:
    result = trace_regularity_r(cfg.traces)
    emit_traces(sink, result)
    checks = {
        "constants_finite": all(row.constant < float("inf") for row in result.rows),
        "threshold_equivalence": all(row.third == row.above_threshold for row in result.bookkeeping),
    }
    constants = {}
    for row in result.rows:
        constants[row.trace] = max(constants.get(row.trace, 0.0), row.constant)
    return checks, {"max_constants": constants}


MODE_RUNNERS = {
    "solve": _solve,
    "kato_sweep": _kato,
    "optimality": _optimality,
    "lambda4": _lambda4,
    "identities": _identities,
    "traces": _traces,
}


def execute_mode(cfg: RunConfig, out_dir: str) -> RunSummary:
    """
    Runs one experiment, writes its artifacts into out_dir and returns the summary.

    Solver errors propagate; the caller decides how to record them.
    """
    ensure_out_dir(out_dir)
    sink = ArtifactSink(out_dir, cfg.emit)
    start = time.time()
    checks, diagnostics = MODE_RUNNERS[cfg.mode](cfg, sink)
    checks = {name: bool(ok) for name, ok in checks.items()}
    diagnostics["duration"] = round(time.time() - start, 2)
    summary = RunSummary(
        mode=cfg.mode,
        status="pass" if all(checks.values()) else "fail",
        checks=checks,
        diagnostics=diagnostics,
        artifacts=[os.path.basename(path) for path in sink.paths],
    )
    if "json" in sink.emit:
        summary.artifacts.append("summary.json")
        write_json(os.path.join(out_dir, "summary.json"), summary)
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        logger.warning(f"{cfg.mode}: failed checks {failed}")
    logger.info(f"{cfg.mode} finished with status {summary.status} in {diagnostics['duration']}s")
    return summary


@celery_app.task(bind=True)
def run_experiment(self, config_json: str, out_dir: str | None = None):
    try:
        cfg = RunConfig.model_validate_json(config_json)
        summary = execute_mode(cfg, out_dir or cfg.out_dir or settings.default_out_dir())
        return {
            "status": summary.status,
            "summary": summary.model_dump(mode="json"),
            "timestamp": datetime.utcnow().isoformat()
        }
    except BihnsError as e:
        logger.error(f"Error in run_experiment: {e}")
        return {
            "status": "error",
            "error": e.message,
            "error_type": type(e).__name__,
            "details": e.details,
            "timestamp": datetime.utcnow().isoformat()
        }
    except Exception as e:
        logger.exception(f"Unexpected error in run_experiment: {e}")
        return {
            "status": "error",
            "error": str(e),
            "error_type": type(e).__name__,
            "details": {},
            "timestamp": datetime.utcnow().isoformat()
        }


@celery_app.task(bind=True)
def kato_sample(self, sweep_json: str, s_index: int, sample: int, seed: int = 0):
    """One (s, sample) cell of a Kato sweep as row dicts, for sweeps spread over workers."""
    try:
        sweep = RegularitySweep.model_validate_json(sweep_json)
        rows = kato_sample_rows(sweep.s_grid[s_index], s_index, sample, sweep, seed)
        return {
            "status": "success",
            "rows": [row.model_dump() for row in rows],
            "timestamp": datetime.utcnow().isoformat()
        }
    except Exception as e:
        logger.error(f"Error in kato_sample: {e}")
        return {
            "status": "error",
            "error": str(e),
            "timestamp": datetime.utcnow().isoformat()
        }
