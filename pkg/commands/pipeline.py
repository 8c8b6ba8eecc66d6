"""Model file → analysis report.

The order is assemble → admissibility → spectrum → existence → invariant set →
gap → classical mirror. Derived quantities whose precondition fails are kept
in the report as not applicable, with the failed precondition as the reason.
"""
import logging

import config
from models.domain_models import (
	DriftDiffusion,
	ExistenceReason,
	ExistenceVerdict,
	InvariantSetDescriptor,
	SpectrumReport,
)
from models.file_models import ModelFile
from models.report_models import (
	AnalysisReport,
	ClassicalMirror,
	ClassicalNormalFormSummary,
	ClusterSummary,
	ExistenceSummary,
	Flag,
	FlagSet,
	GapSummary,
	InvariantSetSummary,
	NormalFormSummary,
	RecurrenceSummary,
	SpectrumSummary,
	StationarySummary,
	SummaryRow,
)
from services import classical_ou, dynamics, invariant
from services.exceptions import HypothesisViolation, NotApplicable, ShapeError, SolverError
from services.gqms_model import assemble, make_drift_diffusion, make_gksl_spec, validate_admissibility
from services.spectral import classify_spectrum
from services.symplectic_core import symplectic_eigenvalues
from utils.formatting import sig, sig_array, sig_complex

logger = logging.getLogger(__name__)

INADMISSIBLE = "model is not admissible"


def build_drift_diffusion(model: ModelFile, tol: float | None = None) -> DriftDiffusion:
	"""Phase-space data of a model file (GKSL sections are assembled first).

	Raises:
		ShapeError, InvalidModel: the arrays violate the model rules.
	"""
	tol = config.DEFAULT_TOL if tol is None else tol
	try:
		arrays = model.gksl.arrays() if model.gksl is not None else model.phase_space.arrays()
	except ValueError as e:
		raise ShapeError(str(e)) from e
	if model.gksl is not None:
		return assemble(make_gksl_spec(**arrays, tol=tol), tol)
	return make_drift_diffusion(arrays["Z"], arrays["C"], arrays["zeta"], tol)


# =========================
# Report sections
# =========================

def _spectrum_summary(spectrum: SpectrumReport, digits: int) -> SpectrumSummary:
	return SpectrumSummary(
		eigenvalues=[sig_complex(ev, digits) for ev in spectrum.eigenvalues],
		n_negative=len(spectrum.class_negative),
		n_imaginary=len(spectrum.class_imaginary),
		n_positive=len(spectrum.class_positive),
		satisfies_H2=spectrum.satisfies_H2,
		imaginary_semisimple=spectrum.imaginary_semisimple,
		clusters=[
			ClusterSummary(value=sig_complex(c.value, digits), algebraic=c.algebraic, geometric=c.geometric)
			for c in spectrum.clusters
		],
	)


def _ground_state(dd: DriftDiffusion, tol: float) -> Flag:
	try:
		return Flag.of(invariant.ground_state_flag(dd, tol))
	except NotApplicable as e:
		return Flag.not_applicable(str(e))


def _gap_summary(descriptor: InvariantSetDescriptor, tol: float, digits: int) -> GapSummary:
	nf = descriptor.normal_form
	decay = dynamics.decay_rate_estimate(nf.Z_minus)
	if nf.Z_minus.shape[0] == 0:
		kms = Flag.not_applicable("no stable block")
		return GapSummary(kms_gap=kms, decay_rate=sig(decay, digits))
	if not descriptor.faithful:
		return GapSummary(kms_gap=Flag.not_applicable("stationary state is not faithful"),
			decay_rate=sig(decay, digits))
	result = dynamics.kms_gap_condition(nf.Z_minus, descriptor.stationary.covariance, tol)
	return GapSummary(
		kms_gap=Flag.of(result.holds),
		kms_witness_min_eig=sig(result.witness_min_eig, digits),
		decay_rate=sig(decay, digits),
	)


def _classical_mirror(dd: DriftDiffusion, tol: float, digits: int) -> ClassicalMirror:
	ou = classical_ou.quantum_classical_correspondence(dd, tol)
	verdict = classical_ou.ou_invariant_exists(ou, tol)
	converged, _ = classical_ou.ou_covariance_limit(ou, tol)
	mirror = ClassicalMirror(
		exists=Flag.of(verdict.exists),
		controllable_in_stable=verdict.controllable_in_stable,
		drift_obstruction=verdict.drift_obstruction,
		covariance_limit_converged=converged,
		irreducible=Flag.of(classical_ou.ou_irreducible(ou, tol)),
	)
	try:
		nf = classical_ou.ou_normal_form(ou, tol)
	except HypothesisViolation as e:
		mirror.normal_form_reason = e.reason
		return mirror
	except SolverError as e:
		logger.warning("classical normal form failed: %s", e)
		mirror.normal_form_reason = ExistenceReason.SPLITTING_FAILED.value
		return mirror
	mirror.normal_form = ClassicalNormalFormSummary(
		kernel_dim=nf.kernel_dim,
		angles=[sig(a, digits) for a in nf.angles],
		stable_dim=nf.A_minus.shape[0],
		absolutely_continuous=nf.absolutely_continuous,
	)
	return mirror


def _invariant_sections(report: AnalysisReport, dd: DriftDiffusion, verdict: ExistenceVerdict,
						tol: float, nmax: int, digits: int) -> None:
	descriptor = invariant.invariant_set_descriptor(dd, tol, nmax=nmax, verdict=verdict)
	nf = descriptor.normal_form
	Sigma = descriptor.stationary.covariance
	report.normal_form = NormalFormSummary(
		d0=nf.d0,
		angles=[sig(a, digits) for a in descriptor.angles],
		signed_angles=[sig(a, digits) for a in descriptor.signed_angles],
		flipped=list(nf.flipped),
		M=sig_array(nf.M, digits),
		w_center=sig_array(nf.w_center, digits),
	)
	report.invariant_set = InvariantSetSummary(
		d0=descriptor.d0,
		zero_angle_count=descriptor.zero_angle_count,
		rational_dependence_witness=list(descriptor.witness) if descriptor.witness is not None else None,
		rational_search_complete=descriptor.rational_search_complete,
		type_I_factor=descriptor.type_I_factor,
		center_dimension=descriptor.center_dimension,
	)
	report.stationary = StationarySummary(
		mean=sig_array(descriptor.stationary.mean, digits),
		covariance=sig_array(Sigma, digits),
		symplectic_eigenvalues=sig_array(symplectic_eigenvalues(Sigma, tol), digits) if Sigma.size else [],
	)
	report.flags.faithful = Flag.of(descriptor.faithful)
	if descriptor.d0 == 0:
		report.flags.rational_dependence = Flag.not_applicable("no rotation block")
	else:
		report.flags.rational_dependence = Flag.of(descriptor.rational_dependence_flag)
	recurrence = invariant.recurrence_classification(descriptor)
	report.recurrence = RecurrenceSummary(
		positive_recurrent_dim_defect=recurrence.positive_recurrent_dim_defect,
		transient_dim=recurrence.transient_dim,
		null_recurrent_trivial=recurrence.null_recurrent_trivial,
	)
	report.gap = _gap_summary(descriptor, tol, digits)


def analyze_model(model: ModelFile, *, tol: float | None = None, nmax: int | None = None,
		digits: int | None = None) -> AnalysisReport:
	"""Full analysis of one model file.

	Raises:
		ShapeError, InvalidModel: the model data are malformed.
	"""
	tol = config.DEFAULT_TOL if tol is None else tol
	nmax = config.RATIONAL_NMAX if nmax is None else nmax
	digits = config.REPORT_DIGITS if digits is None else digits

	dd = build_drift_diffusion(model, tol)
	admissible = validate_admissibility(dd, tol)
	report = AnalysisReport(
		model_name=model.name,
		description=model.metadata.description,
		d=dd.d,
		tol=tol,
		admissible=admissible,
		flags=FlagSet(
			faithful=Flag.not_applicable(INADMISSIBLE),
			irreducible=Flag.not_applicable(INADMISSIBLE),
			ground_state=Flag.not_applicable(INADMISSIBLE),
			rational_dependence=Flag.not_applicable(INADMISSIBLE),
		),
	)
	if not admissible:
		logger.info("model %s is not admissible; derived quantities skipped", model.name)
		return report

	report.spectrum = _spectrum_summary(classify_spectrum(dd.Z, tol), digits)
	verdict = invariant.decide_existence(dd, tol)
	report.existence = ExistenceSummary(
		exists=verdict.exists,
		reason=verdict.reason.value,
		center_residual=sig(verdict.normal_form.center_residual, digits) if verdict.normal_form else None,
	)
	report.flags.irreducible = Flag.of(invariant.is_irreducible(dd, tol))
	report.flags.ground_state = _ground_state(dd, tol)
	if verdict.exists:
		_invariant_sections(report, dd, verdict, tol, nmax, digits)
	else:
		reason = f"no invariant state: {verdict.reason.value}"
		report.flags.faithful = Flag.not_applicable(reason)
		report.flags.rational_dependence = Flag.not_applicable(reason)
	report.classical_mirror = _classical_mirror(dd, tol, digits)
	logger.info("analyzed %s: exists=%s reason=%s", model.name, verdict.exists, verdict.reason.value)
	return report


def summary_row(report: AnalysisReport, file: str) -> SummaryRow:
	existence = report.existence
	return SummaryRow(
		name=report.model_name,
		file=file,
		exists=existence.exists if existence else None,
		reason=existence.reason if existence else INADMISSIBLE,
		d0=report.normal_form.d0 if report.normal_form else None,
		faithful=report.flags.faithful.value,
		irreducible=report.flags.irreducible.value,
		gap_holds=report.gap.kms_gap.value if report.gap else None,
	)


def serialize_report(report: AnalysisReport, fmt: str = "json") -> str:
	if fmt == "compact":
		return report.model_dump_json() + "\n"
	return report.model_dump_json(indent=2) + "\n"


__all__ = [
	"INADMISSIBLE",
	"build_drift_diffusion",
	"analyze_model",
	"summary_row",
	"serialize_report",
]
