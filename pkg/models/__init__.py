"""Data models used by the application.

Split into:
- `domain_models`: immutable numerical value objects used by the services
- `file_models`: Pydantic schema of model files
- `report_models`: Pydantic schema of analysis reports and batch summaries

Import submodules to make them available as `models.domain_models`.
"""

from . import domain_models, file_models, report_models

# Re-export the file and report schemas (Pydantic models used for I/O)
from .file_models import ModelFile, ModelMetadata, GkslSection, PhaseSpaceSection
from .report_models import (
	AnalysisReport,
	BatchSummary,
	FailureRecord,
	Flag,
	SummaryRow,
)

# Re-export the core domain types
from .domain_models import (
	DriftDiffusion,
	GkslSpec,
	ExistenceReason,
	GaussianParams,
)

__all__ = [
	# submodules
	"domain_models",
	"file_models",
	"report_models",
	# file and report models
	"ModelFile",
	"ModelMetadata",
	"GkslSection",
	"PhaseSpaceSection",
	"AnalysisReport",
	"BatchSummary",
	"FailureRecord",
	"Flag",
	"SummaryRow",
	# domain models
	"DriftDiffusion",
	"GkslSpec",
	"ExistenceReason",
	"GaussianParams",
]
