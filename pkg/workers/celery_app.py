"""Celery app configuration for batch analysis."""
import sys
from pathlib import Path

# Add project root to Python path so imports work when celery runs this module directly
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import pytz
from celery import Celery
from kombu import Exchange, Queue
import logging
import config

logger = logging.getLogger(__name__)

# Initialize Celery app
app = Celery("gqms")

logger.debug(f"[CELERY] broker_url={config.CELERY_BROKER_URL} result_backend={config.CELERY_RESULT_BACKEND} "
             f"eager={config.CELERY_ALWAYS_EAGER}")

# Load config from a dedicated module or dict
app.config_from_object({
    "broker_url": config.CELERY_BROKER_URL,
    "result_backend": config.CELERY_RESULT_BACKEND,
    "task_serializer": "json",
    "accept_content": ["json"],
    "result_serializer": "json",
    "timezone": pytz.UTC,
    "enable_utc": True,
    "task_acks_late": True,
    "worker_prefetch_multiplier": 1,
    # In-process execution: batch runs need no broker or worker
    "task_always_eager": config.CELERY_ALWAYS_EAGER,
    "task_eager_propagates": True,
})

# Define queues
analysis_exchange = Exchange("analysis", type="direct")

app.conf.task_queues = (
    Queue(
        "analysis",
        exchange=analysis_exchange,
        routing_key="analysis",
    ),
)

# Default queue for tasks without explicit routing
app.conf.task_default_queue = "analysis"
app.conf.task_default_exchange = "analysis"
app.conf.task_default_routing_key = "analysis"

# Task configuration defaults
app.conf.task_default_retry_delay = 5
app.conf.task_max_retries = 3

# Tasks are imported in workers/__init__.py to avoid circular recursion
