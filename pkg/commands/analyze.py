"""`analyze <file>`: one model file to one report."""
import logging
import sys
from pathlib import Path

from models.report_models import AnalysisReport
from stores import FileModelStore
from .pipeline import analyze_model, serialize_report

logger = logging.getLogger(__name__)


def run_analyze(path: str | Path, *, tol: float | None = None, nmax: int | None = None,
				fmt: str = "json", out: str | Path | None = None, digits: int | None = None) -> AnalysisReport:
	"""Analyze a model file; the report goes to `out` or stdout.

	Raises:
		ModelNotFound, ModelFileError: the file cannot be loaded.
		ShapeError, InvalidModel: the model data are malformed.
	"""
	store = FileModelStore()
	model = store.load_model(path)
	report = analyze_model(model, tol=tol, nmax=nmax, digits=digits)
	text = serialize_report(report, fmt)
	if out is None:
		sys.stdout.write(text)
	else:
		out = Path(out)
		FileModelStore(out_dir=out.parent).write_text(out.name, text)
		logger.info("report for %s written to %s", model.name, out)
	return report


__all__ = ["run_analyze"]
