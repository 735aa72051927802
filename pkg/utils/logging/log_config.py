import sys

from loguru import logger

from utils.config import settings

_configured = False


def configure_logging(level: str | None = None) -> None:
    """
    Install the stderr sink (and the optional file sink) once per process.

    Args:
        level: overrides BIHNS_LOG_LEVEL when given
    """
    global _configured
    if _configured and level is None:
        return
    logger.remove()
    sink_level = (level or settings.log_level()).upper()
    logger.add(
        sys.stderr,
        level=sink_level,
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {name}:{line} - {message}",
    )
    path = settings.log_file()
    if path:
        logger.add(path, level=sink_level, rotation="10 MB")
    _configured = True
