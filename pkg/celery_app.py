import os
import sys

from celery import Celery

from utils.config import settings

sys.path.append(os.path.dirname(os.path.abspath(__file__)))


celery_app = Celery(
    "bihns_worker",
    broker=settings.broker_url(),
    backend=settings.result_backend(),
    include=['tasks.lab_tasks']
)


celery_app.conf.update(
    task_routes={
        'tasks.lab_tasks.run_experiment': {'queue': 'lab_queue'},
        'tasks.lab_tasks.kato_sample': {'queue': 'lab_queue'},
    },
    # in-process unless BIHNS_CELERY_EAGER=false and a worker is listening on lab_queue
    task_always_eager=settings.celery_eager(),
    task_eager_propagates=False,
    task_track_started=True,
    task_time_limit=3600,
)
