import os

from dotenv import load_dotenv

load_dotenv()


def _as_bool(value: str) -> bool:
    return value.strip().lower() in {"1", "true", "yes", "on"}


def thread_cap() -> int:
    """Worker threads for sweeps, capped by BIHNS_THREADS."""
    raw = os.getenv("BIHNS_THREADS")
    default = os.cpu_count() or 1
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def log_level() -> str:
    return os.getenv("BIHNS_LOG_LEVEL", "INFO").upper()


def log_file() -> str | None:
    return os.getenv("BIHNS_LOG_FILE") or None


def celery_eager() -> bool:
    return _as_bool(os.getenv("BIHNS_CELERY_EAGER", "true"))


def broker_url() -> str:
    return os.getenv("CELERY_BROKER_URL", "redis://localhost:6379/0")


def result_backend() -> str:
    return os.getenv("CELERY_RESULT_BACKEND", "redis://localhost:6379/0")


def default_out_dir() -> str:
    return os.getenv("BIHNS_OUT_DIR", "bihns_out")
