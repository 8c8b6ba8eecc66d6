"""`evolve <file>`: moment trajectory as a comma-delimited table.

Columns: t, m_1..m_2d, S_i_j for i ≤ j (covariance upper triangle, 1-based),
eid_defect for the probe vector (nan when no invariant state exists).
"""
import io
import logging
import math
from pathlib import Path

import numpy as np

import config
from services import dynamics, invariant
from services.exceptions import ShapeError
from stores import FileModelStore
from .pipeline import build_drift_diffusion

logger = logging.getLogger(__name__)


def trajectory_header(n: int) -> list[str]:
	names = ["t"] + [f"m_{i + 1}" for i in range(n)]
	names += [f"S_{i + 1}_{j + 1}" for i in range(n) for j in range(i, n)]
	return names + ["eid_defect"]


def run_evolve(path: str | Path, *, m0=None, Sigma0=None, T: float = 10.0, steps: int = 100,
		probe=None, out: str | Path | None = None, tol: float | None = None,
		precision: int | None = None) -> str:
	"""Evolve (m0, Σ0) over [0, T] in `steps` equal steps and write the table.

	Defaults: m0 = 0, Σ0 = I (the vacuum), probe = first unit vector.

	Raises:
		InadmissibleCovariance: Σ0 + iJ is not positive semidefinite.
		ShapeError: m0, Σ0 or the probe do not match the model dimension.
	"""
	tol = config.DEFAULT_TOL if tol is None else tol
	precision = config.TRAJECTORY_DIGITS if precision is None else precision
	if steps < 1:
		raise ShapeError("must be at least 1", field="steps")
	model = FileModelStore().load_model(path)
	dd = build_drift_diffusion(model, tol)
	n = dd.Z.shape[0]

	m0 = np.zeros(n) if m0 is None else np.asarray(m0, dtype=float).reshape(-1)
	if Sigma0 is None:
		Sigma0 = np.eye(n)
	Sigma0 = np.asarray(Sigma0, dtype=float)
	if Sigma0.ndim == 1 and Sigma0.size == n * n:
		Sigma0 = Sigma0.reshape(n, n)
	z = np.eye(n)[0] if probe is None else np.asarray(probe, dtype=float).reshape(-1)
	if z.shape != (n,):
		raise ShapeError(f"expected length {n}, got {z.shape[0]}", field="probe")

	times = np.linspace(0.0, T, steps + 1)
	traj = dynamics.evolve_moments(dd, m0, Sigma0, times, tol)

	verdict = invariant.decide_existence(dd, tol)
	if verdict.exists:
		defects = [dynamics.eid_defect(dd, verdict.split, z, t) for t in times]
	else:
		logger.warning("no invariant state (%s); eid_defect column is nan", verdict.reason.value)
		defects = [math.nan] * times.size

	upper = np.triu_indices(n)
	rows = np.column_stack([
		times,
		traj.means,
		np.array([S[upper] for S in traj.covariances]),
		np.array(defects),
	])
	buffer = io.StringIO()
	np.savetxt(buffer, rows, delimiter=",", fmt=f"%.{precision}g",
		header=",".join(trajectory_header(n)), comments="")
	text = buffer.getvalue()
	if out is not None:
		out = Path(out)
		FileModelStore(out_dir=out.parent).write_text(out.name, text)
		logger.info("trajectory of %s (%d rows) written to %s", model.name, rows.shape[0], out)
	return text


__all__ = ["trajectory_header", "run_evolve"]
