"""Celery task definitions for batch analysis."""
from celery import Task
from celery.exceptions import SoftTimeLimitExceeded
import logging
from typing import Any, Dict
from functools import wraps

from workers.celery_app import app

logger = logging.getLogger(__name__)

soft_time_limit = 300  # seconds
hard_time_limit = 600  # seconds


def failure_record(exc: Exception, path: str) -> Dict[str, Any]:
	return {
		"status": "failure",
		"error": exc.__class__.__name__,
		"message": str(exc),
		"path": path,
	}


def celery_task(**task_kwargs):
	"""Combined decorator that registers a Celery task and adds error handling.

	Automatically:
	- Registers the function as a Celery task via @app.task()
	- Wraps execution with error handling (SoftTimeLimitExceeded, generic exceptions)
	- For retryable exceptions: logs and re-raises to allow Celery's autoretry mechanism
	- For non-retryable exceptions: logs and returns a failure record naming the model file

	Usage:
		@celery_task(bind=True, name="workers.tasks.my_task")
		def my_task(self, path, ...):
			# business logic
	"""
	def decorator(func):
		@wraps(func)
		def wrapper(self, path, *args, **kwargs):
			try:
				return func(self, path, *args, **kwargs)
			except SoftTimeLimitExceeded:
				logger.warning(f"{func.__name__} exceeded soft time limit on {path}")
				raise
			except Exception as exc:
				# Unknown exceptions are not retried
				is_retryable = getattr(exc, "retryable", False)

				if not is_retryable:
					logger.error(f"{func.__name__} failed on {path} with non-retryable error: {exc.__class__.__name__}: {exc}", exc_info=True)
					return failure_record(exc, path)
				else:
					logger.error(f"{func.__name__} failed on {path} with retryable error: {exc.__class__.__name__}: {exc}", exc_info=True)
					raise
		# Register as Celery task with error handling
		return app.task(base=AnalysisTask, **task_kwargs)(wrapper)
	return decorator


class AnalysisTask(Task):
	"""Base task class with retry policy and logging."""

	autoretry_for = (Exception,)
	retry_kwargs = {"max_retries": 3}
	retry_backoff = True
	retry_backoff_max = 60
	retry_jitter = True

	def on_retry(self, exc: Exception, task_id: str, args: tuple, kwargs: dict, einfo: Any) -> None:
		"""Log retry events."""
		logger.warning(
			f"Task {self.name} (id={task_id}) retrying after {exc}",
			extra={"task_id": task_id, "task_args": args},
		)

	def on_failure(self, exc: Exception, task_id: str, args: tuple, kwargs: dict, einfo: Any) -> None:
		"""Log task failures."""
		logger.error(
			f"Task {self.name} (id={task_id}) failed with {exc}",
			extra={"task_id": task_id, "task_args": args},
			exc_info=einfo,
		)

	def on_success(self, result: Any, task_id: str, args: tuple, kwargs: dict) -> None:
		"""Log task successes."""
		logger.info(
			f"Task {self.name} (id={task_id}) finished with status {result.get('status')}",
			extra={"task_id": task_id},
		)


@celery_task(
	bind=True,
	name="workers.tasks.analyze_model_task",
	soft_time_limit=soft_time_limit,
	time_limit=hard_time_limit,
)
def analyze_model_task(self, path: str, options: Dict[str, Any] | None = None) -> Dict[str, Any]:
	"""
	Analyze one model file.

	Args:
		path: model file path
		options: {"tol": float, "nmax": int, "digits": int}, all optional

	Returns:
		dict: {"status": "success", "path": str, "report": <AnalysisReport as JSON data>}
		or a failure record {"status": "failure", "error", "message", "path"}.
	"""
	from commands.pipeline import analyze_model
	from stores import FileModelStore

	options = options or {}
	logger.info(f"Analyzing {path}")
	model = FileModelStore().load_model(path)
	report = analyze_model(model, tol=options.get("tol"), nmax=options.get("nmax"), digits=options.get("digits"))
	return {
		"status": "success",
		"path": path,
		"report": report.model_dump(mode="json"),
	}


__all__ = [
	"celery_task",
	"AnalysisTask",
	"failure_record",
	"analyze_model_task",
]
