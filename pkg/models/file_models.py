"""Pydantic schema of model files.

A model file is JSON with a `metadata` block and exactly one of
- `gksl`: Omega, kappa, zeta, U, V with complex entries written as [re, im] pairs
- `phase_space`: Z, C (row-major real matrices) and zeta (real vector)

Shapes are checked here only as far as the JSON structure goes (rectangular
arrays); the dimension rules live in `services.gqms_model`.
"""
from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from utils.validation import is_valid_name

ComplexEntry = tuple[float, float]


def _rectangular(value, field: str, ndim: int) -> np.ndarray:
	try:
		a = np.asarray(value, dtype=float)
	except (TypeError, ValueError) as e:
		raise ValueError(f"{field} is not a rectangular array") from e
	if a.ndim != ndim:
		raise ValueError(f"{field} must have {ndim} dimensions, got {a.ndim}")
	return a


def complex_array(value, field: str, ndim: int) -> np.ndarray:
	"""[re, im]-pair nested lists to a complex array of dimension `ndim`."""
	if ndim == 2 and len(value) == 0:
		return np.zeros((0, 0), dtype=complex)
	a = _rectangular(value, field, ndim + 1)
	if a.shape[-1] != 2:
		raise ValueError(f"{field} entries must be [re, im] pairs")
	return a[..., 0] + 1j * a[..., 1]


class ModelMetadata(BaseModel):
	model_config = ConfigDict(extra="forbid")

	name: str
	description: str = ""

	@field_validator("name")
	@classmethod
	def _check_name(cls, v: str) -> str:
		if not is_valid_name(v):
			raise ValueError("invalid model name")
		return v.strip()


class GkslSection(BaseModel):
	model_config = ConfigDict(extra="forbid")

	Omega: list[list[ComplexEntry]]
	kappa: list[list[ComplexEntry]] | None = None
	zeta: list[ComplexEntry] | None = None
	U: list[list[ComplexEntry]] = []
	V: list[list[ComplexEntry]] = []

	@model_validator(mode="after")
	def _check_rectangular(self) -> "GkslSection":
		for name in ("Omega", "kappa", "U", "V"):
			value = getattr(self, name)
			if value:
				_rectangular(value, name, 3)
		return self

	def arrays(self) -> dict[str, np.ndarray]:
		Omega = complex_array(self.Omega, "Omega", 2)
		d = Omega.shape[0]
		return {
			"Omega": Omega,
			"kappa": complex_array(self.kappa, "kappa", 2) if self.kappa else np.zeros((d, d), dtype=complex),
			"zeta": complex_array(self.zeta, "zeta", 1) if self.zeta else np.zeros(d, dtype=complex),
			"U": complex_array(self.U, "U", 2) if self.U else np.zeros((0, d), dtype=complex),
			"V": complex_array(self.V, "V", 2) if self.V else np.zeros((0, d), dtype=complex),
		}


class PhaseSpaceSection(BaseModel):
	model_config = ConfigDict(extra="forbid")

	Z: list[list[float]]
	C: list[list[float]]
	zeta: list[float] | None = None

	@model_validator(mode="after")
	def _check_rectangular(self) -> "PhaseSpaceSection":
		_rectangular(self.Z, "Z", 2)
		_rectangular(self.C, "C", 2)
		return self

	def arrays(self) -> dict[str, np.ndarray]:
		Z = _rectangular(self.Z, "Z", 2)
		return {
			"Z": Z,
			"C": _rectangular(self.C, "C", 2),
			"zeta": np.asarray(self.zeta, dtype=float) if self.zeta is not None else np.zeros(Z.shape[0]),
		}


class ModelFile(BaseModel):
	model_config = ConfigDict(extra="forbid")

	metadata: ModelMetadata
	gksl: GkslSection | None = None
	phase_space: PhaseSpaceSection | None = None

	@model_validator(mode="after")
	def _exactly_one_section(self) -> "ModelFile":
		if (self.gksl is None) == (self.phase_space is None):
			raise ValueError("exactly one of 'gksl' and 'phase_space' must be present")
		return self

	@property
	def name(self) -> str:
		return self.metadata.name


__all__ = [
	"ComplexEntry",
	"complex_array",
	"ModelMetadata",
	"GkslSection",
	"PhaseSpaceSection",
	"ModelFile",
]
