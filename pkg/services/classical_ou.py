# classical_ou.py
"""Classical Ornstein-Uhlenbeck semigroups dX = (AX + b)dt + B dW.

The quantum analyzer maps onto this one through A = Zᵀ, BBᵀ = C, b = ζ:
both mean equations then read dm/dt = Am + b.
"""
import logging
import math

import numpy as np
import scipy.linalg

import config
from models.domain_models import DriftDiffusion, OuInvariantResult, OuModel, OuNormalForm
from services.dynamics import propagators
from services.exceptions import InvalidModel, ShapeError, SolverError
from services.invariant import block_pairs
from services.spectral import invariant_splitting
from utils.linalg import fro, orth, psd_sqrt, solve_lyapunov, subspace_contains, sym, unobservable_subspace

logger = logging.getLogger(__name__)

_MAX_DOUBLINGS = 64
_LIMIT_RTOL = 1e-10


def make_ou_model(A, B, b) -> OuModel:
    """Validate OU data; a 1-D B of length d is read as a single noise column."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    d = A.shape[0]
    if A.ndim != 2 or A.shape != (d, d) or d == 0:
        raise ShapeError(f"must be a nonempty square matrix, got {A.shape}", field="A")
    B = np.asarray(B, dtype=float)
    if B.size == 0 or (B.ndim == 0 and B == 0):
        B = np.zeros((d, 0))
    elif B.ndim <= 1:
        B = B.reshape(d, -1) if B.size % d == 0 else B
    if B.ndim != 2 or B.shape[0] != d:
        raise ShapeError(f"expected {d} rows, got shape {B.shape}", field="B")
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.size == 1 and d > 1 and b[0] == 0:  # scalar zero drive
        b = np.zeros(d)
    if b.shape != (d,):
        raise ShapeError(f"expected length {d}, got {b.shape[0]}", field="b")
    for name, value in (("A", A), ("B", B), ("b", b)):
        if not np.all(np.isfinite(value)):
            raise InvalidModel("contains non-finite entries", field=name)
    return OuModel(A=A, B=B, b=b)


def ou_char_coefficient(model: OuModel, z, x, t: float) -> complex:
    """T_t(e^{i⟨z,·⟩})(x)."""
    z = np.asarray(z, dtype=float).reshape(-1)
    x = np.asarray(x, dtype=float).reshape(-1)
    if z.shape != (model.d,) or x.shape != (model.d,):
        raise ShapeError(f"z and x must have length {model.d}", field="z")
    E, G, h = propagators(model.A.T, model.B @ model.B.T, model.b, t)
    return complex(np.exp(1j * (h @ z) - 0.5 * z @ G @ z + 1j * ((E @ z) @ x)))


def controllability_span(model: OuModel, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis of span[B, AB, ..., A^{d-1}B]."""
    tol = config.DEFAULT_TOL if tol is None else tol
    A, B = model.A, model.B
    if B.shape[1] == 0 or not np.any(B):
        return np.zeros((model.d, 0))
    A_n = A / (fro(A) or 1.0)
    columns, current = [], B / fro(B)
    for _ in range(model.d):
        columns.append(current)
        current = A_n @ current
    return orth(np.hstack(columns), tol)


def stable_subspace(A: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Orthonormal real basis of the sum of generalized eigenspaces with Re λ < 0."""
    tol = config.DEFAULT_TOL if tol is None else tol
    threshold = tol * (1.0 + fro(A))
    try:
        _, Q, sdim = scipy.linalg.schur(
            A.astype(complex), output="complex", sort=lambda x, y=None: np.real(x) < -threshold
        )
    except (ValueError, np.linalg.LinAlgError) as e:
        raise SolverError(f"Schur decomposition failed: {e}") from e
    if sdim == 0:
        return np.zeros((A.shape[0], 0))
    Q_s = Q[:, :sdim]
    return orth(np.hstack([Q_s.real, Q_s.imag]))


def ou_invariant_exists(model: OuModel, tol: float | None = None) -> OuInvariantResult:
    """Invariant measure criterion: noise confined to the stable subspace and a fixed point of the drift."""
    tol = config.DEFAULT_TOL if tol is None else tol
    A, b = model.A, model.b
    K = controllability_span(model, tol)
    S = stable_subspace(A, tol)
    controllable = subspace_contains(S, K, math.sqrt(tol))

    A_pinv = np.linalg.pinv(A, rcond=tol)
    mean = -A_pinv @ b
    drift_obstruction = fro(A @ mean + b) > math.sqrt(tol) * (1.0 + fro(b))
    exists = controllable and not drift_obstruction
    logger.debug("ou existence: dim K=%d dim S-=%d controllable=%s drift_obstruction=%s",
                 K.shape[1], S.shape[1], controllable, drift_obstruction)
    if not exists:
        return OuInvariantResult(False, None, controllable_in_stable=controllable,
                                 drift_obstruction=drift_obstruction)

    if S.shape[1]:
        A_s = S.T @ A @ S
        noise = sym(S.T @ model.B @ model.B.T @ S)
        Sigma = S @ solve_lyapunov(A_s.T, noise) @ S.T
    else:
        Sigma = np.zeros_like(A)
    return OuInvariantResult(True, sym(Sigma), controllable_in_stable=True,
                             drift_obstruction=False, mean=mean)


def ou_covariance_limit(model: OuModel, tol: float | None = None) -> tuple[bool, np.ndarray | None]:
    """Limit of ∫₀ᵗ e^{sA}BBᵀe^{sAᵀ}ds by repeated doubling of t.

    The integrand lives on the controllable subspace, so the doubling runs on
    A restricted there and unreachable unstable directions cannot amplify
    rounding errors.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    K = controllability_span(model, tol)
    if K.shape[1] == 0:
        return True, np.zeros((model.d, model.d))
    A_k = K.T @ model.A @ K
    B_k = K.T @ model.B
    t0 = 1.0 / max(fro(A_k), 1.0)
    E, G, _ = propagators(A_k.T, B_k @ B_k.T, np.zeros(K.shape[1]), t0)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(_MAX_DOUBLINGS):
            increment = E.T @ G @ E
            if not (np.all(np.isfinite(increment)) and np.all(np.isfinite(E))):
                break
            if fro(increment) <= _LIMIT_RTOL * (1.0 + fro(G)):
                return True, sym(K @ (G + increment) @ K.T)
            G = sym(G + increment)
            E = E @ E
    logger.debug("covariance integral did not converge after %d doublings", _MAX_DOUBLINGS)
    return False, None


def ou_irreducible(model: OuModel, tol: float | None = None) -> bool:
    """No nonzero Aᵀ-invariant subspace inside ker(BBᵀ)."""
    tol = config.DEFAULT_TOL if tol is None else tol
    basis = unobservable_subspace(model.A.T, model.B @ model.B.T, rcond=tol)
    return basis.shape[1] == 0


def quantum_classical_correspondence(dd: DriftDiffusion, tol: float | None = None) -> OuModel:
    """OU model with A = Zᵀ, B = C^{1/2}, b = ζ.

    Raises:
        InvalidModel: C is not positive semidefinite.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    if np.linalg.eigvalsh(dd.C).min() < -tol * (1.0 + fro(dd.C)):
        raise InvalidModel("is not positive semidefinite", field="C")
    return OuModel(A=dd.Z.T.copy(), B=psd_sqrt(dd.C), b=dd.zeta.copy())


def ou_normal_form(model: OuModel, tol: float | None = None) -> OuNormalForm:
    """Real block form of Aᵀ: kernel, rotation planes, stable block.

    T has columns [kernel, (a₁, b₁), ..., stable basis]; T⁻¹AᵀT is block
    diagonal with rotation blocks [[0, -φ], [φ, 0]].

    Raises:
        HypothesisViolation: Aᵀ has eigenvalues with positive real part or a
            defective imaginary eigenvalue.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    At = model.A.T
    split = invariant_splitting(At, tol, phase_space=False)
    kernel_cols, rotation_cols, angles = [], [], []
    for block in split.blocks:
        for a, b_vec, angle, _ in block_pairs(block, None, tol, symplectic=False):
            if b_vec is None:
                kernel_cols.append(a)
            else:
                rotation_cols.extend([a, b_vec])
                angles.append(angle)
    Vm = split.Vminus_basis
    T = np.column_stack(kernel_cols + rotation_cols + list(Vm.T))
    try:
        T_inv = np.linalg.inv(T)
    except np.linalg.LinAlgError as e:
        raise SolverError(f"block basis is singular: {e}") from e

    k = len(kernel_cols)
    n0 = k + len(rotation_cols)
    A_new = T_inv @ At @ T
    BB_new = sym(T.T @ model.B @ model.B.T @ T)
    b_new = T.T @ model.b
    verdict = ou_invariant_exists(model, tol)
    absolutely_continuous = False
    if verdict.exists and Vm.shape[1]:
        Sigma_s = Vm.T @ verdict.Sigma_inf @ Vm
        absolutely_continuous = bool(np.linalg.eigvalsh(Sigma_s).min() > tol * (1.0 + fro(Sigma_s)))
    logger.debug("ou normal form: kernel=%d angles=%s stable=%d", k, angles, Vm.shape[1])
    return OuNormalForm(
        T=T,
        kernel_dim=k,
        angles=tuple(float(a) for a in angles),
        A_minus=A_new[n0:, n0:],
        BB_minus=BB_new[n0:, n0:],
        b_kernel=b_new[:k],
        exists=verdict.exists,
        absolutely_continuous=absolutely_continuous,
    )


__all__ = [
    "make_ou_model",
    "ou_char_coefficient",
    "controllability_span",
    "stable_subspace",
    "ou_invariant_exists",
    "ou_covariance_limit",
    "ou_irreducible",
    "quantum_classical_correspondence",
    "ou_normal_form",
]
