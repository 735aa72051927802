import argparse
import json
import os
import sys

from loguru import logger
from pydantic import ValidationError

from data_modals.pydantic_models.config_modals import MODE_SECTIONS, RunConfig
from data_modals.pydantic_models.response_modals import ErrorResponse
from services.exceptions import ConfigError, ConstraintError
from utils.config import settings
from utils.emitters import ensure_out_dir, write_json
from utils.logging.log_config import configure_logging

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2


def _location(error: dict) -> str:
    return ".".join(str(part) for part in error["loc"]) or "<root>"


def load_config(path: str, mode: str | None = None, out: str | None = None, seed: int | None = None) -> RunConfig:
    """
    Reads and validates a run configuration; command-line values override the file.

    Raises ConfigError with a line:column or field location, or ConstraintError for a
    violated problem constraint.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            raw = handle.read()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror}", path)
    try:
        data = json.loads(raw) if raw.strip() else {}
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e.msg}", f"{e.lineno}:{e.colno}")
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object", "1:1")

    if mode is not None:
        data["mode"] = mode
    if out is not None:
        data["out_dir"] = out
    if seed is not None:
        data["seed"] = seed
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError(f"{first['msg']} ({e.error_count()} error(s))", _location(first))


def run(cfg: RunConfig) -> int:
    """Runs the configured experiment through the lab task and returns the exit code."""
    from tasks.lab_tasks import run_experiment

    out_dir = cfg.out_dir or settings.default_out_dir()
    result = run_experiment.delay(cfg.model_dump_json(), out_dir).get()
    if result["status"] == "error":
        ensure_out_dir(out_dir)
        record = ErrorResponse(
            detail=result["error"],
            status="error",
            error_type=result.get("error_type", "Exception"),
            context={"mode": cfg.mode, **result.get("details", {})},
        )
        write_json(os.path.join(out_dir, "error.json"), record)
        logger.error(f"{cfg.mode} failed: {result['error']}")
        return EXIT_FAIL
    summary = result["summary"]
    logger.info(f"Artifacts in {out_dir}: {', '.join(summary['artifacts'])}")
    return EXIT_PASS if result["status"] == "pass" else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bihns", description="Biharmonic NLS solver and verification lab")
    parser.add_argument("mode", choices=list(MODE_SECTIONS))
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", default=None, help="output directory (default BIHNS_OUT_DIR)")
    parser.add_argument("--seed", type=int, default=None, help="unsigned 64-bit seed for randomized sweeps")
    parser.add_argument("--log-level", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        cfg = load_config(args.config, args.mode, args.out, args.seed)
    except (ConfigError, ConstraintError) as e:
        record = ErrorResponse(detail=e.message, status="invalid", error_type=type(e).__name__, context=e.details)
        logger.error(f"Invalid config: {e}")
        sys.stderr.write(record.model_dump_json() + "\n")
        return EXIT_INVALID
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
