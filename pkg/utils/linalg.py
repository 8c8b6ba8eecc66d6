"""Dense linear-algebra helpers shared by the numerical services.

Rank decisions follow one policy everywhere: a singular value counts as zero
when it is at most ``rcond * sigma_max``.
"""
import logging

import numpy as np
import scipy.linalg

import config
from services.exceptions import SolverError, ShapeError

logger = logging.getLogger(__name__)

DEFAULT_RCOND = 1e-9


def fro(a) -> float:
	return float(np.linalg.norm(a)) if np.size(a) else 0.0


def sym(a: np.ndarray) -> np.ndarray:
	return 0.5 * (a + a.T)


def null_space(a: np.ndarray, rcond: float = DEFAULT_RCOND, *, atol: float = 0.0) -> np.ndarray:
	"""Orthonormal basis (columns) of ker(a); real or complex input.

	``atol`` raises the cutoff above the relative one when the caller knows
	the data carries a perturbation of that size.
	"""
	a = np.atleast_2d(a)
	n = a.shape[1]
	if a.shape[0] == 0 or not np.any(a):
		return np.eye(n, dtype=a.dtype if np.iscomplexobj(a) else float)
	_, s, vh = np.linalg.svd(a, full_matrices=True)
	cutoff = max(rcond * s[0], atol)
	rank = int(np.sum(s > cutoff))
	return vh[rank:].conj().T


def orth(a: np.ndarray, rcond: float = DEFAULT_RCOND) -> np.ndarray:
	"""Orthonormal basis of range(a)."""
	a = np.atleast_2d(a)
	if a.shape[1] == 0 or not np.any(a):
		return np.zeros((a.shape[0], 0), dtype=a.dtype)
	u, s, _ = np.linalg.svd(a, full_matrices=False)
	rank = int(np.sum(s > rcond * s[0]))
	return u[:, :rank]


def unobservable_subspace(a: np.ndarray, b: np.ndarray, rcond: float = DEFAULT_RCOND) -> np.ndarray:
	"""Largest a-invariant subspace of ker(b), as  ∩_{k<n} ker(b a^k).

	Works over the reals or the complexes depending on the input dtypes.
	b and a are scaled to unit norm first so the stacked rows stay bounded.
	"""
	n = a.shape[0]
	scale = fro(a) or 1.0
	a_n = a / scale
	norm = fro(b) or 1.0
	blocks = []
	current = b / norm
	for _ in range(n):
		blocks.append(current)
		current = current @ a_n
	stacked = np.vstack(blocks)
	basis = null_space(stacked, rcond)
	logger.debug("unobservable subspace: n=%d dim=%d", n, basis.shape[1])
	return basis


def projector(basis: np.ndarray) -> np.ndarray:
	"""Orthogonal projector onto span(basis)."""
	q = orth(basis)
	return q @ q.conj().T


def subspace_contains(big: np.ndarray, small: np.ndarray, tol: float) -> bool:
	"""True iff span(small) ⊆ span(big) at tolerance."""
	if small.shape[1] == 0:
		return True
	q_small = orth(small)
	if q_small.shape[1] == 0:
		return True
	if big.shape[1] == 0:
		return False
	q_big = orth(big)
	residual = q_small - q_big @ (q_big.conj().T @ q_small)
	return fro(residual) <= tol * (1.0 + fro(q_small))


def same_subspace(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
	return subspace_contains(x, y, tol) and subspace_contains(y, x, tol)


def psd_sqrt(c: np.ndarray) -> np.ndarray:
	"""Symmetric square root of a symmetric PSD matrix (negative noise clipped)."""
	w, v = np.linalg.eigh(sym(c))
	w = np.clip(w, 0.0, None)
	return sym((v * np.sqrt(w)) @ v.T)


def solve_lyapunov(z: np.ndarray, c: np.ndarray) -> np.ndarray:
	"""Solve Zᵀ X + X Z + C = 0 for X.

	Uses the vectorised (Kronecker) system up to config.LYAPUNOV_MAX_DIM and
	Bartels-Stewart above it.
	"""
	n = z.shape[0]
	if c.shape != (n, n):
		raise ShapeError(f"expected {n}x{n}, got {c.shape}", field="C")
	if n == 0:
		return np.zeros((0, 0))
	try:
		if n <= config.LYAPUNOV_MAX_DIM:
			eye = np.eye(n)
			# row-major vec: vec(Zᵀ X) = (Zᵀ ⊗ I) vec X, vec(X Z) = (I ⊗ Zᵀ) vec X
			lhs = np.kron(z.T, eye) + np.kron(eye, z.T)
			x = np.linalg.solve(lhs, -c.reshape(-1)).reshape(n, n)
		else:
			x = scipy.linalg.solve_continuous_lyapunov(z.T, -c)
	except np.linalg.LinAlgError as e:
		raise SolverError(f"Lyapunov system is singular: {e}") from e
	x = sym(x) if np.allclose(c, c.T) else x
	logger.debug("lyapunov n=%d residual=%.3e", n, fro(z.T @ x + x @ z + c))
	return x


__all__ = [
	"DEFAULT_RCOND",
	"fro",
	"sym",
	"null_space",
	"orth",
	"unobservable_subspace",
	"projector",
	"subspace_contains",
	"same_subspace",
	"psd_sqrt",
	"solve_lyapunov",
]
