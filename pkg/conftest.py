import os

# tasks run in-process and only warnings reach the log during tests
os.environ.setdefault("BIHNS_CELERY_EAGER", "true")
os.environ.setdefault("BIHNS_LOG_LEVEL", "WARNING")

import pytest

from utils.logging.log_config import configure_logging


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    configure_logging("WARNING")
    yield
