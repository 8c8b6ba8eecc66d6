"""Pydantic models of analysis reports and batch summaries.

Every float is already rounded (`utils.formatting`) when a report is built,
so `model_dump_json` is byte-deterministic and parses back to an equal model.
Non-finite values are stored as null.
"""
from __future__ import annotations

from pydantic import BaseModel

Matrix = list[list[float | None]]
Vector = list[float | None]
ComplexValue = list[float | None]


class Flag(BaseModel):
	"""A boolean verdict, or the precondition that made it not applicable."""
	value: bool | None = None
	applicable: bool = True
	reason: str | None = None

	@classmethod
	def of(cls, value: bool) -> "Flag":
		return cls(value=bool(value))

	@classmethod
	def not_applicable(cls, reason: str) -> "Flag":
		return cls(value=None, applicable=False, reason=reason)


class ClusterSummary(BaseModel):
	value: ComplexValue
	algebraic: int
	geometric: int


class SpectrumSummary(BaseModel):
	eigenvalues: list[ComplexValue]
	n_negative: int
	n_imaginary: int
	n_positive: int
	satisfies_H2: bool
	imaginary_semisimple: bool
	clusters: list[ClusterSummary] = []


class ExistenceSummary(BaseModel):
	exists: bool
	reason: str
	center_residual: float | None = None


class NormalFormSummary(BaseModel):
	d0: int
	angles: Vector
	signed_angles: Vector
	flipped: list[bool]
	M: Matrix
	w_center: Vector


class InvariantSetSummary(BaseModel):
	d0: int
	zero_angle_count: int
	rational_dependence_witness: list[int] | None = None
	rational_search_complete: bool = True
	type_I_factor: bool = True
	center_dimension: int = 0


class StationarySummary(BaseModel):
	"""Stationary Gaussian factor on the stable block, in normal-form coordinates."""
	mean: Vector
	covariance: Matrix
	symplectic_eigenvalues: Vector


class FlagSet(BaseModel):
	faithful: Flag
	irreducible: Flag
	ground_state: Flag
	rational_dependence: Flag


class RecurrenceSummary(BaseModel):
	positive_recurrent_dim_defect: int
	transient_dim: int
	null_recurrent_trivial: bool = True


class GapSummary(BaseModel):
	kms_gap: Flag
	kms_witness_min_eig: float | None = None
	decay_rate: float | None = None


class ClassicalNormalFormSummary(BaseModel):
	kernel_dim: int
	angles: Vector
	stable_dim: int
	absolutely_continuous: bool


class ClassicalMirror(BaseModel):
	exists: Flag
	controllable_in_stable: bool | None = None
	drift_obstruction: bool | None = None
	covariance_limit_converged: bool | None = None
	irreducible: Flag
	normal_form: ClassicalNormalFormSummary | None = None
	normal_form_reason: str | None = None


class AnalysisReport(BaseModel):
	model_name: str
	description: str = ""
	d: int
	tol: float
	admissible: bool
	spectrum: SpectrumSummary | None = None
	existence: ExistenceSummary | None = None
	normal_form: NormalFormSummary | None = None
	invariant_set: InvariantSetSummary | None = None
	stationary: StationarySummary | None = None
	flags: FlagSet
	recurrence: RecurrenceSummary | None = None
	gap: GapSummary | None = None
	classical_mirror: ClassicalMirror | None = None


class SummaryRow(BaseModel):
	name: str
	file: str
	exists: bool | None = None
	reason: str | None = None
	d0: int | None = None
	faithful: bool | None = None
	irreducible: bool | None = None
	gap_holds: bool | None = None


class FailureRecord(BaseModel):
	path: str
	error: str
	message: str


class BatchSummary(BaseModel):
	rows: list[SummaryRow] = []
	failures: list[FailureRecord] = []


SUMMARY_COLUMNS = ["name", "file", "exists", "reason", "d0", "faithful", "irreducible", "gap_holds"]


__all__ = [
	"Flag",
	"ClusterSummary",
	"SpectrumSummary",
	"ExistenceSummary",
	"NormalFormSummary",
	"InvariantSetSummary",
	"StationarySummary",
	"FlagSet",
	"RecurrenceSummary",
	"GapSummary",
	"ClassicalNormalFormSummary",
	"ClassicalMirror",
	"AnalysisReport",
	"SummaryRow",
	"FailureRecord",
	"BatchSummary",
	"SUMMARY_COLUMNS",
]
