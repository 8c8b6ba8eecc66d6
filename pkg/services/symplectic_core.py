# symplectic_core.py
"""Real-symplectic linear algebra on ℝ^{2d}.

Coordinates are ordered (x_1..x_d, p_1..p_d) and the symplectic form is
J = [[0, I], [-I, 0]]. A complex vector z ∈ ℂ^d is identified with
(Re z, Im z) ∈ ℝ^{2d}.
"""
import logging

import numpy as np
import scipy.linalg

import config
from models.domain_models import RealLinearOp, WilliamsonDecomposition
from services.exceptions import NotPositiveDefinite, ShapeError, SolverError
from utils.linalg import fro, sym

logger = logging.getLogger(__name__)


def as_phase_matrix(a, field: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a real 2d×2d float array."""
    try:
        a = np.asarray(a, dtype=float)
    except (TypeError, ValueError) as e:
        raise ShapeError(f"not a real matrix ({e})", field=field) from e
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"must be square, got shape {a.shape}", field=field)
    n = a.shape[0]
    if n == 0 or n % 2:
        raise ShapeError(f"dimension {n} is not a positive even number", field=field)
    if not np.all(np.isfinite(a)):
        raise ShapeError("contains non-finite entries", field=field)
    return a


def standard_form(d: int) -> np.ndarray:
    """Canonical J on ℝ^{2d}."""
    if d < 1:
        raise ShapeError(f"mode count must be positive, got {d}", field="d")
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([[zero, eye], [-eye, zero]])


def _form_for(a: np.ndarray) -> np.ndarray:
    return standard_form(a.shape[0] // 2)


def is_symplectic(M, tol: float | None = None) -> bool:
    tol = config.DEFAULT_TOL if tol is None else tol
    M = as_phase_matrix(M, "M")
    J = _form_for(M)
    return fro(M.T @ J @ M - J) <= tol * (1.0 + fro(M) ** 2)


def is_hamiltonian_generator(Z, tol: float | None = None) -> bool:
    """True iff ZᵀJ + JZ = 0, i.e. e^{tZ} is symplectic for all t."""
    tol = config.DEFAULT_TOL if tol is None else tol
    Z = as_phase_matrix(Z, "Z")
    J = _form_for(Z)
    return fro(Z.T @ J + J @ Z) <= tol * (1.0 + fro(Z))


def embed_real_linear(op: RealLinearOp) -> np.ndarray:
    """Real 2d×2d matrix of z ↦ A1 z + A2 z̄."""
    a1 = np.asarray(op.A1, dtype=complex)
    a2 = np.asarray(op.A2, dtype=complex)
    if a1.ndim != 2 or a1.shape[0] != a1.shape[1]:
        raise ShapeError(f"must be square, got shape {a1.shape}", field="A1")
    if a1.shape != a2.shape:
        raise ShapeError(f"shape {a2.shape} does not match A1 {a1.shape}", field="A2")
    return np.block([
        [a1.real + a2.real, a2.imag - a1.imag],
        [a1.imag + a2.imag, a1.real - a2.real],
    ])


def compose_real_linear(a: RealLinearOp, b: RealLinearOp) -> RealLinearOp:
    """The operator a∘b on the (A1, A2) representation."""
    a1, a2 = np.asarray(a.A1, dtype=complex), np.asarray(a.A2, dtype=complex)
    b1, b2 = np.asarray(b.A1, dtype=complex), np.asarray(b.A2, dtype=complex)
    return RealLinearOp(A1=a1 @ b1 + a2 @ b2.conj(), A2=a1 @ b2 + a2 @ b1.conj())


def embed_vector(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    return np.concatenate([z.real, z.imag])


def skew_canonical_form(K: np.ndarray, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonal Q with QᵀKQ = [[0, N], [-N, 0]], N = diag(nu), nu > 0.

    K must be real skew-symmetric and nonsingular. Its real Schur form is
    block diagonal with 2×2 blocks; each block is oriented so that its upper
    right entry is positive, and the block columns are split into the "x"
    and "p" halves of Q. Pairs are returned in Schur order.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    n = K.shape[0]
    if n % 2:
        raise SolverError(f"skew form of odd dimension {n} is degenerate")
    T, Q = scipy.linalg.schur(K, output="real")
    scale = fro(K) or 1.0
    x_cols, p_cols, nu = [], [], []
    i = 0
    while i < n:
        if i + 1 >= n or abs(T[i + 1, i]) <= tol * scale:
            raise SolverError(f"skew form is degenerate at Schur index {i}")
        q1, q2 = Q[:, i], Q[:, i + 1]
        val = float(q1 @ K @ q2)
        if val < 0:
            q1, q2, val = q2, q1, -val
        x_cols.append(q1)
        p_cols.append(q2)
        nu.append(val)
        i += 2
    return np.column_stack(x_cols + p_cols), np.array(nu)


def darboux_basis(G: np.ndarray, tol: float | None = None) -> np.ndarray:
    """T with Tᵀ G T = J for a nondegenerate skew Gram matrix G."""
    tol = config.DEFAULT_TOL if tol is None else tol
    Q, nu = skew_canonical_form(0.5 * (G - G.T), tol)
    if nu.size and nu.min() <= tol * (fro(G) or 1.0):
        raise SolverError("skew form is degenerate")
    return Q / np.sqrt(np.concatenate([nu, nu]))


def symplectic_eigenvalues(Sigma, tol: float | None = None) -> np.ndarray:
    """Moduli of the eigenvalues of iJΣ, one per ± pair, sorted descending."""
    Sigma = as_phase_matrix(Sigma, "Sigma")
    ev = np.abs(np.linalg.eigvals(1j * _form_for(Sigma) @ Sigma))
    return np.sort(ev)[::-1][::2]


def is_admissible_covariance(Sigma, tol: float | None = None) -> bool:
    """Σ symmetric with Σ + iJ ⪰ 0 (the uncertainty relation)."""
    tol = config.DEFAULT_TOL if tol is None else tol
    Sigma = as_phase_matrix(Sigma, "Sigma")
    if fro(Sigma - Sigma.T) > tol * (1.0 + fro(Sigma)):
        return False
    herm = sym(Sigma) + 1j * _form_for(Sigma)
    return float(np.linalg.eigvalsh(herm).min()) >= -tol * (1.0 + fro(Sigma))


def williamson(Sigma, tol: float | None = None) -> WilliamsonDecomposition:
    """Symplectic diagonalisation Σ = Mᵀ D M.

    With S = Σ^{1/2} the matrix K = S J S is skew and, in a suitable
    orthonormal basis Q, equals diag(ν, ν) J. Then M = diag(ν, ν)^{-1/2} Qᵀ S.

    Raises:
        NotPositiveDefinite: if Σ is not symmetric positive definite.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    Sigma = as_phase_matrix(Sigma, "Sigma")
    norm = fro(Sigma)
    if fro(Sigma - Sigma.T) > tol * (1.0 + norm):
        raise NotPositiveDefinite("Sigma is not symmetric")
    Sigma = sym(Sigma)
    w, v = np.linalg.eigh(Sigma)
    if w.min() <= tol * norm:
        raise NotPositiveDefinite(f"smallest eigenvalue {w.min():.3e} is not positive")
    S = sym((v * np.sqrt(w)) @ v.T)
    d = Sigma.shape[0] // 2
    K = S @ standard_form(d) @ S
    Q, nu = skew_canonical_form(0.5 * (K - K.T), tol)

    order = np.argsort(-nu, kind="stable")
    Q = Q[:, np.concatenate([order, order + d])]
    nu = nu[order]
    pairs = np.concatenate([nu, nu])
    M = (Q / np.sqrt(pairs)).T @ S
    logger.debug("williamson d=%d nu=%s", d, nu)
    return WilliamsonDecomposition(M=M, D=np.diag(pairs))


__all__ = [
    "as_phase_matrix",
    "standard_form",
    "is_symplectic",
    "is_hamiltonian_generator",
    "embed_real_linear",
    "compose_real_linear",
    "embed_vector",
    "skew_canonical_form",
    "darboux_basis",
    "symplectic_eigenvalues",
    "is_admissible_covariance",
    "williamson",
]
