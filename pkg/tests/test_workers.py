import numpy as np

from conftest import model_document
from models.report_models import AnalysisReport
from workers.tasks import analyze_model_task, failure_record


def test_task_returns_report(gallery_dir):
    outcome = analyze_model_task.apply(args=(str(gallery_dir / "damped_mode.json"), {"digits": 8})).get()
    assert outcome["status"] == "success"
    report = AnalysisReport.model_validate(outcome["report"])
    assert report.existence.exists
    assert report.model_name == "damped mode"


def test_task_turns_input_errors_into_failure_records(write_model):
    path = write_model("odd.json", model_document("odd", -np.eye(3), np.eye(3)))
    outcome = analyze_model_task.apply(args=(str(path), None)).get()
    assert outcome["status"] == "failure"
    assert outcome["error"] == "ShapeError"
    assert outcome["path"] == str(path)
    assert outcome["message"].startswith("Z:")


def test_failure_record():
    record = failure_record(ValueError("boom"), "m.json")
    assert record == {"status": "failure", "error": "ValueError", "message": "boom", "path": "m.json"}
