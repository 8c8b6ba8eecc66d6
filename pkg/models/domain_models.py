"""Domain-level typed models used by the numerical services.

These are immutable value objects holding numpy arrays. Array fields are
copied and marked read-only on construction, so a value can be shared
between callers (and worker threads) without defensive copies.

Matrices on phase space are plain ``np.ndarray`` of shape (2d, 2d) with the
coordinate order (x_1..x_d, p_1..p_d).
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from enum import Enum

import numpy as np

PhaseMatrix = np.ndarray
SymplecticForm = np.ndarray


class _FrozenArrays:
	def __post_init__(self):
		for f in fields(self):
			value = getattr(self, f.name)
			if isinstance(value, np.ndarray):
				value = np.array(value, copy=True)
				value.setflags(write=False)
				object.__setattr__(self, f.name, value)


# --- symplectic core ---

@dataclass(frozen=True, eq=False)
class RealLinearOp(_FrozenArrays):
	"""z ↦ A1 z + A2 z̄ on ℂ^d."""
	A1: np.ndarray
	A2: np.ndarray


@dataclass(frozen=True, eq=False)
class WilliamsonDecomposition(_FrozenArrays):
	M: np.ndarray
	D: np.ndarray

	@property
	def nu(self) -> np.ndarray:
		d = self.D.shape[0] // 2
		return np.diag(self.D)[:d]


# --- model data ---

@dataclass(frozen=True, eq=False)
class GkslSpec(_FrozenArrays):
	Omega: np.ndarray
	kappa: np.ndarray
	zeta: np.ndarray
	U: np.ndarray
	V: np.ndarray

	@property
	def d(self) -> int:
		return self.Omega.shape[0]

	@property
	def m(self) -> int:
		return self.U.shape[0]


@dataclass(frozen=True, eq=False)
class DriftDiffusion(_FrozenArrays):
	Z: np.ndarray
	C: np.ndarray
	zeta: np.ndarray

	@property
	def d(self) -> int:
		return self.Z.shape[0] // 2


# --- spectral ---

@dataclass(frozen=True, eq=False)
class ImaginaryCluster:
	value: complex
	algebraic: int
	geometric: int
	spread: float = 0.0

	@property
	def semisimple(self) -> bool:
		return self.algebraic == self.geometric


@dataclass(frozen=True, eq=False)
class SpectrumReport(_FrozenArrays):
	eigenvalues: np.ndarray
	class_negative: tuple[int, ...]
	class_imaginary: tuple[int, ...]
	class_positive: tuple[int, ...]
	satisfies_H2: bool
	imaginary_semisimple: bool
	clusters: tuple[ImaginaryCluster, ...] = ()


@dataclass(frozen=True, eq=False)
class SpectralBlock(_FrozenArrays):
	"""Eigenvectors of one imaginary eigenvalue iφ, φ ≥ 0.

	For φ > 0 the columns are complex eigenvectors; for φ = 0 they are a real
	kernel basis.
	"""
	angle: float
	vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class SpectralSplit(_FrozenArrays):
	V0_basis: np.ndarray
	Vminus_basis: np.ndarray
	angles: tuple[float, ...]
	blocks: tuple[SpectralBlock, ...] = ()
	zero_dim: int = 0

	@property
	def d0(self) -> int:
		return self.V0_basis.shape[1] // 2


# --- invariant states ---

class ExistenceReason(str, Enum):
	H2_VIOLATED = "H2_violated"
	NOT_SEMISIMPLE = "imaginary_not_semisimple"
	V0_NOT_IN_KER_C = "V0_not_in_kerC"
	CENTER_OBSTRUCTION = "center_displacement_obstruction"
	V0_DEGENERATE = "V0_symplectic_degenerate"
	SPLITTING_FAILED = "spectral_splitting_failed"
	OK = "ok"


@dataclass(frozen=True, eq=False)
class NormalForm(_FrozenArrays):
	M: np.ndarray
	d0: int
	Phi: np.ndarray
	Z_minus: np.ndarray
	C_minus: np.ndarray
	zeta0: np.ndarray
	zeta_minus: np.ndarray
	w_center: np.ndarray
	reduced: DriftDiffusion | None = None
	center_residual: float = 0.0
	flipped: tuple[bool, ...] = ()

	@property
	def Z0(self) -> np.ndarray:
		if not self.d0:
			return np.zeros((0, 0))
		phi = np.diag(self.Phi)
		zero = np.zeros_like(phi)
		return np.block([[zero, -phi], [phi, zero]])


@dataclass(frozen=True, eq=False)
class GaussianParams(_FrozenArrays):
	mean: np.ndarray
	covariance: np.ndarray


@dataclass(frozen=True, eq=False)
class ExistenceVerdict:
	exists: bool
	reason: ExistenceReason
	normal_form: NormalForm | None = None
	spectrum: SpectrumReport | None = None
	split: SpectralSplit | None = None


@dataclass(frozen=True, eq=False)
class InvariantSetDescriptor:
	d0: int
	angles: tuple[float, ...]
	signed_angles: tuple[float, ...]
	zero_angle_count: int
	rational_dependence_flag: bool
	witness: tuple[int, ...] | None
	stationary: GaussianParams
	faithful: bool
	irreducible: bool
	type_I_factor: bool = True
	center_dimension: int = 0
	rational_search_complete: bool = True
	normal_form: NormalForm | None = None


@dataclass(frozen=True)
class RecurrenceClassification:
	positive_recurrent_dim_defect: int
	transient_dim: int
	null_recurrent_trivial: bool = True


# --- dynamics ---

@dataclass(frozen=True, eq=False)
class WeylSymbol(_FrozenArrays):
	z: np.ndarray
	amplitude: complex
	evolved_z: np.ndarray


@dataclass(frozen=True, eq=False)
class Trajectory(_FrozenArrays):
	times: np.ndarray
	means: np.ndarray
	covariances: np.ndarray


@dataclass(frozen=True, eq=False)
class ErgodicAverage(_FrozenArrays):
	avg_mean: np.ndarray
	avg_covariance: np.ndarray
	predicted_mean: np.ndarray
	predicted_covariance: np.ndarray
	mean_deviation: float = 0.0
	covariance_deviation: float = 0.0


@dataclass(frozen=True)
class KmsGapResult:
	holds: bool
	witness_min_eig: float


@dataclass(frozen=True)
class FiniteGap:
	gap_form: float
	gap_decay: float


# --- planted test models ---

@dataclass(frozen=True, eq=False)
class PlantedModel:
	"""A model built from a known normal form: dd = displace(conjugate(reduced, N), w)."""
	dd: DriftDiffusion
	reduced: DriftDiffusion
	conjugation: np.ndarray
	displacement: np.ndarray
	Phi: tuple[float, ...]
	n_stable: int
	expected_reason: ExistenceReason = ExistenceReason.OK


# --- classical ---

@dataclass(frozen=True, eq=False)
class OuModel(_FrozenArrays):
	A: np.ndarray
	B: np.ndarray
	b: np.ndarray

	@property
	def d(self) -> int:
		return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class OuInvariantResult(_FrozenArrays):
	exists: bool
	Sigma_inf: np.ndarray | None
	controllable_in_stable: bool = True
	drift_obstruction: bool = False
	mean: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class OuNormalForm(_FrozenArrays):
	T: np.ndarray
	kernel_dim: int
	angles: tuple[float, ...]
	A_minus: np.ndarray
	BB_minus: np.ndarray
	b_kernel: np.ndarray
	exists: bool
	absolutely_continuous: bool


__all__ = [
	"PhaseMatrix",
	"SymplecticForm",
	"RealLinearOp",
	"WilliamsonDecomposition",
	"GkslSpec",
	"DriftDiffusion",
	"ImaginaryCluster",
	"SpectrumReport",
	"SpectralBlock",
	"SpectralSplit",
	"ExistenceReason",
	"NormalForm",
	"GaussianParams",
	"ExistenceVerdict",
	"InvariantSetDescriptor",
	"RecurrenceClassification",
	"WeylSymbol",
	"Trajectory",
	"ErgodicAverage",
	"KmsGapResult",
	"FiniteGap",
	"PlantedModel",
	"OuModel",
	"OuInvariantResult",
	"OuNormalForm",
]
