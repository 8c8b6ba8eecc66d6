"""`batch <dir>`: analyze every model file in a directory.

One celery task per file (sorted by file name); results are gathered in
submission order and written serially: `<stem>.report.json` per model
(`<stem>_2.report.json`, ... when sanitised stems clash),
`summary.json` (rows and failures) and `summary.csv`.
"""
import csv
import io
import logging
from pathlib import Path

from models.report_models import AnalysisReport, BatchSummary, FailureRecord, SUMMARY_COLUMNS
from stores import FileModelStore
from utils.validation import safe_stem
from .pipeline import serialize_report, summary_row

logger = logging.getLogger(__name__)


def summary_csv(summary: BatchSummary) -> str:
	buffer = io.StringIO()
	writer = csv.DictWriter(buffer, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
	writer.writeheader()
	for row in summary.rows:
		writer.writerow({k: "" if v is None else v for k, v in row.model_dump().items()})
	return buffer.getvalue()


def report_names(paths: list[Path]) -> dict[Path, str]:
	"""`<stem>.report.json` per input; stems that clash after sanitising get `_2`, `_3`, ... in path order."""
	names: dict[Path, str] = {}
	taken: set[str] = set()
	for path in paths:
		base = safe_stem(path.stem)
		stem, n = base, 1
		while stem.casefold() in taken:
			n += 1
			stem = f"{base}_{n}"
		if n > 1:
			logger.warning(f"report name {base} already used; {path.name} is written as {stem}.report.json")
		taken.add(stem.casefold())
		names[path] = f"{stem}.report.json"
	return names


def run_batch(model_dir: str | Path, out_dir: str | Path | None = None, *, tol: float | None = None,
		nmax: int | None = None, fmt: str = "json", digits: int | None = None) -> BatchSummary:
	"""Analyze all `*.json` files of `model_dir`; per-model failures are recorded, never raised.

	Raises:
		StoreError: the directory cannot be listed.
	"""
	from workers.tasks import analyze_model_task, failure_record

	model_dir = Path(model_dir)
	store = FileModelStore(model_dir, out_dir if out_dir is not None else Path("reports"))
	paths = store.list_models()
	names = report_names(paths)
	options = {"tol": tol, "nmax": nmax, "digits": digits}

	pending = [(path, analyze_model_task.delay(str(path), options)) for path in paths]
	summary = BatchSummary()
	for path, result in pending:
		try:
			outcome = result.get()
		except Exception as exc:
			logger.error(f"analysis of {path} raised {exc.__class__.__name__}: {exc}", exc_info=True)
			outcome = failure_record(exc, str(path))
		if outcome.get("status") != "success":
			summary.failures.append(FailureRecord(
				path=path.name, error=outcome["error"], message=outcome["message"],
			))
			continue
		report = AnalysisReport.model_validate(outcome["report"])
		store.write_text(names[path], serialize_report(report, fmt))
		summary.rows.append(summary_row(report, path.name))

	store.write_text("summary.json", summary.model_dump_json(indent=2) + "\n")
	store.write_text("summary.csv", summary_csv(summary))
	logger.info("batch: %d analyzed, %d failed", len(summary.rows), len(summary.failures))
	return summary


__all__ = ["summary_csv", "report_names", "run_batch"]
