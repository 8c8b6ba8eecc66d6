# invariant.py
"""Normal invariant states of a Gaussian quantum Markov semigroup.

Existence is decided by four tests, in this order:
    (a) no eigenvalue of Z with positive real part,
    (b) imaginary eigenvalues semisimple,
    (c) V₀ ⊆ ker C,
    (d) after the symplectic normal form, ζ̃ has no component along the
        zero-angle directions of the rotation block.
On success the normal form and the Gaussian factor on V₋ describe every
invariant state.

Coordinates after the normal form are (x₀, x₋, p₀, p₋): the first d₀ modes
carry the rotation block [[0, -Φ], [Φ, 0]], the remaining modes the stable
block.
"""
import itertools
import logging
import math

import numpy as np
import scipy.linalg

import config
from models.domain_models import (
    DriftDiffusion,
    ExistenceReason,
    ExistenceVerdict,
    GaussianParams,
    InvariantSetDescriptor,
    NormalForm,
    RecurrenceClassification,
    SpectralSplit,
)
from services.exceptions import (
    HypothesisViolation,
    NotApplicable,
    NotStable,
    ShapeError,
    SolverError,
    SymplecticCompletionError,
)
from services.gqms_model import conjugate_symplectic, displace_weyl, hermitian_constraint
from services.spectral import center_dimension, classify_spectrum, invariant_splitting
from services.symplectic_core import (
    darboux_basis,
    is_hamiltonian_generator,
    standard_form,
    williamson,
)
from utils.linalg import fro, solve_lyapunov, unobservable_subspace

logger = logging.getLogger(__name__)


def mode_indices(d: int, d0: int) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate indices of the first d0 modes and of the remaining ones."""
    idx0 = np.r_[0:d0, d:d + d0]
    idx_minus = np.r_[d0:d, d + d0:2 * d]
    return idx0, idx_minus


def _v0_in_ker_c(dd: DriftDiffusion, split: SpectralSplit, tol: float) -> bool:
    V0 = split.V0_basis
    if V0.shape[1] == 0:
        return True
    return fro(dd.C @ V0) <= tol * (1.0 + fro(dd.C)) * (1.0 + fro(V0))


# =========================
# Normal form
# =========================

def block_pairs(block, J: np.ndarray, tol: float, symplectic: bool):
    """Canonical pairs (a, b, signed angle, flipped) spanning one V₀ block.

    Symplectic pairs satisfy aᵀJb = 1 and Za = Φb, Zb = -Φa.
    """
    pairs = []
    if block.angle > 0:
        W = block.vectors
        if not symplectic:
            for w in W.T:
                pairs.append((w.real, -w.imag, block.angle, False))
            return pairs
        # Hermitian form u ↦ ½ uᴴ(iJ)u equals the pairing of (Re u, -Im u)
        G = 0.5 * W.conj().T @ (1j * J) @ W
        lam, vecs = np.linalg.eigh(0.5 * (G + G.conj().T))
        if np.min(np.abs(lam)) <= math.sqrt(tol) * (1.0 + np.max(np.abs(lam))):
            raise SymplecticCompletionError(block.angle, "symplectic form degenerates on the eigenspace")
        for k in range(lam.size):
            u = W @ vecs[:, k] / math.sqrt(abs(lam[k]))
            if lam[k] > 0:
                pairs.append((u.real, -u.imag, block.angle, False))
            else:
                pairs.append((u.real, u.imag, -block.angle, True))
        return pairs

    V = np.asarray(block.vectors.real)
    if not symplectic:
        return [(v, None, 0.0, False) for v in V.T]
    if V.shape[1] % 2:
        raise SymplecticCompletionError(0.0, f"kernel of Z has odd dimension {V.shape[1]}")
    try:
        T = darboux_basis(V.T @ J @ V, math.sqrt(tol))
    except SolverError as e:
        raise SymplecticCompletionError(0.0, str(e)) from e
    X = V @ T
    half = V.shape[1] // 2
    return [(X[:, j], X[:, half + j], 0.0, False) for j in range(half)]


def _symplectic_basis(dd: DriftDiffusion, split: SpectralSplit, tol: float):
    """Columns B with BᵀJB = J mapping canonical coordinates to the V₀ ⊕ V₋ split."""
    d = dd.d
    J = standard_form(d)
    pairs = []
    for block in split.blocks:
        pairs.extend(block_pairs(block, J, tol, symplectic=True))
    d0 = len(pairs)

    Vm = split.Vminus_basis
    if Vm.shape[1]:
        try:
            T = darboux_basis(Vm.T @ J @ Vm, math.sqrt(tol))
        except SolverError as e:
            raise SymplecticCompletionError("stable", str(e)) from e
        Xm = Vm @ T
        half = Vm.shape[1] // 2
        a_minus, b_minus = Xm[:, :half], Xm[:, half:]
    else:
        a_minus = b_minus = np.zeros((2 * d, 0))

    a0 = np.column_stack([p[0] for p in pairs]) if pairs else np.zeros((2 * d, 0))
    b0 = np.column_stack([p[1] for p in pairs]) if pairs else np.zeros((2 * d, 0))
    if d0 and a_minus.shape[1]:
        cross = np.hstack([a0, b0]).T @ J @ np.hstack([a_minus, b_minus])
        if np.max(np.abs(cross)) > math.sqrt(tol) * (1.0 + fro(a0) + fro(b0)) * (1.0 + fro(a_minus)):
            raise SymplecticCompletionError("stable", "V0 and V- are not symplectically orthogonal")

    B = np.hstack([a0, a_minus, b0, b_minus])
    Phi = np.array([p[2] for p in pairs], dtype=float)
    flipped = tuple(bool(p[3]) for p in pairs)
    return B, d0, Phi, flipped


def normal_form(dd: DriftDiffusion, tol: float | None = None, *, split: SpectralSplit | None = None) -> NormalForm:
    """Symplectic normal form of data satisfying (a)-(c).

    Raises:
        HypothesisViolation: (a), (b) or (c) fails.
        SymplecticCompletionError: a block admits no symplectic basis.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    split = split if split is not None else invariant_splitting(dd.Z, tol)
    if not _v0_in_ker_c(dd, split, tol):
        raise HypothesisViolation(ExistenceReason.V0_NOT_IN_KER_C.value, "V0 is not contained in ker C")

    d = dd.d
    B, d0, Phi, flipped = _symplectic_basis(dd, split, tol)
    M = np.linalg.inv(B)
    conjugated = conjugate_symplectic(dd, M, tol=math.sqrt(tol))
    idx0, idx_minus = mode_indices(d, d0)
    zeta = conjugated.zeta

    # pseudo-inverse of Z₀ᵀ = [[0, Φ], [-Φ, 0]] is [[0, -Φ⁺], [Φ⁺, 0]]
    phi_pinv = np.array([1.0 / phi if phi != 0 else 0.0 for phi in Phi])
    zeta0 = zeta[idx0]
    w0 = 0.5 * np.concatenate([-phi_pinv * zeta0[d0:], phi_pinv * zeta0[:d0]])
    w_center = np.zeros(2 * d)
    w_center[idx0] = w0
    kernel = np.concatenate([Phi == 0, Phi == 0]) if d0 else np.zeros(0, dtype=bool)
    center_residual = float(np.linalg.norm(zeta0[kernel])) if d0 else 0.0

    nf = NormalForm(
        M=M,
        d0=d0,
        Phi=Phi,
        Z_minus=conjugated.Z[np.ix_(idx_minus, idx_minus)],
        C_minus=conjugated.C[np.ix_(idx_minus, idx_minus)],
        zeta0=zeta0,
        zeta_minus=zeta[idx_minus],
        w_center=w_center,
        reduced=displace_weyl(conjugated, w_center),
        center_residual=center_residual,
        flipped=flipped,
    )
    logger.debug("normal form d=%d d0=%d Phi=%s residual=%.3e", d, d0, Phi, center_residual)
    return nf


def decide_existence(dd: DriftDiffusion, tol: float | None = None) -> ExistenceVerdict:
    """Decide whether the semigroup admits a normal invariant state."""
    tol = config.DEFAULT_TOL if tol is None else tol
    spectrum = classify_spectrum(dd.Z, tol)
    if not spectrum.satisfies_H2:
        return ExistenceVerdict(False, ExistenceReason.H2_VIOLATED, spectrum=spectrum)
    if not spectrum.imaginary_semisimple:
        return ExistenceVerdict(False, ExistenceReason.NOT_SEMISIMPLE, spectrum=spectrum)

    try:
        split = invariant_splitting(dd.Z, tol)
    except SolverError as e:
        logger.warning("spectral splitting failed: %s", e)
        return ExistenceVerdict(False, ExistenceReason.SPLITTING_FAILED, spectrum=spectrum)
    if not _v0_in_ker_c(dd, split, tol):
        return ExistenceVerdict(False, ExistenceReason.V0_NOT_IN_KER_C, spectrum=spectrum, split=split)
    try:
        nf = normal_form(dd, tol, split=split)
    except SymplecticCompletionError as e:
        logger.warning("normal form failed: %s", e)
        return ExistenceVerdict(False, ExistenceReason.V0_DEGENERATE, spectrum=spectrum, split=split)

    threshold = tol * (1.0 + fro(dd.zeta)) * (1.0 + fro(nf.M))
    if nf.center_residual > threshold:
        return ExistenceVerdict(
            False, ExistenceReason.CENTER_OBSTRUCTION, normal_form=nf, spectrum=spectrum, split=split,
        )
    return ExistenceVerdict(True, ExistenceReason.OK, normal_form=nf, spectrum=spectrum, split=split)


# =========================
# Stationary Gaussian factor
# =========================

def stationary_gaussian(Z_minus, C_minus, zeta_minus, tol: float | None = None) -> GaussianParams:
    """Unique stationary mean and covariance of a strictly stable block.

    Raises:
        NotStable: Z_minus has an eigenvalue with Re λ ≥ 0 (at tolerance).
        SolverError: singular linear or Lyapunov system.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    Z = np.asarray(Z_minus, dtype=float)
    C = np.asarray(C_minus, dtype=float)
    zeta = np.asarray(zeta_minus, dtype=float).reshape(-1)
    n = Z.shape[0]
    if n == 0:
        return GaussianParams(mean=np.zeros(0), covariance=np.zeros((0, 0)))
    if Z.shape != (n, n) or C.shape != (n, n) or zeta.shape != (n,):
        raise ShapeError(f"inconsistent stable block shapes {Z.shape}, {C.shape}, {zeta.shape}")
    abscissa = float(np.max(np.linalg.eigvals(Z).real))
    if abscissa >= -tol * (1.0 + fro(Z)):
        raise NotStable(f"spectral abscissa {abscissa:.3e} is not negative")
    try:
        mean = np.linalg.solve(Z.T, -zeta)
    except np.linalg.LinAlgError as e:
        raise SolverError(f"stationary mean: {e}") from e
    Sigma = solve_lyapunov(Z, C)
    residual = fro(Z.T @ Sigma + Sigma @ Z + C)
    if residual > tol * (fro(C) + fro(Z) * fro(Sigma)):
        logger.warning("Lyapunov residual %.3e above tolerance", residual)
    return GaussianParams(mean=mean, covariance=Sigma)


def is_faithful(stationary: GaussianParams, tol: float | None = None) -> bool:
    """Σ∞ + iJ strictly positive (the stationary factor has full support)."""
    tol = config.DEFAULT_TOL if tol is None else tol
    Sigma = stationary.covariance
    if Sigma.shape[0] == 0:
        return True
    herm = Sigma + 1j * standard_form(Sigma.shape[0] // 2)
    return float(np.linalg.eigvalsh(herm).min()) > tol * (1.0 + fro(Sigma))


def is_irreducible(dd: DriftDiffusion, tol: float | None = None) -> bool:
    """No nonzero Z-invariant subspace of ker C_Z, over ℂ^{2d}."""
    tol = config.DEFAULT_TOL if tol is None else tol
    cz = hermitian_constraint(dd)
    basis = unobservable_subspace(dd.Z.astype(complex), cz, rcond=tol)
    return basis.shape[1] == 0


def is_stationary(dd: DriftDiffusion, params: GaussianParams, tol: float | None = None) -> bool:
    """True iff the Gaussian state (m, Σ) is invariant: Zᵀm + ζ = 0 and ZᵀΣ + ΣZ + C = 0."""
    tol = config.DEFAULT_TOL if tol is None else tol
    Z, m, Sigma = dd.Z, params.mean, params.covariance
    mean_residual = fro(Z.T @ m + dd.zeta)
    cov_residual = fro(Z.T @ Sigma + Sigma @ Z + dd.C)
    scale = 1.0 + fro(dd.C) + fro(Z) * (1.0 + fro(Sigma) + fro(m)) + fro(dd.zeta)
    return mean_residual <= tol * scale and cov_residual <= tol * scale


# =========================
# Invariant-state set
# =========================

def rational_dependence(angles, nmax: int | None = None, tol: float | None = None,
                        max_candidates: int | None = None) -> tuple[tuple[int, ...] | None, bool]:
    """Smallest nonzero integer n with |n_j| ≤ nmax and |Σ n_j φ_j| ≤ tol.

    Candidates are visited by increasing max|n_j|, lexicographically inside a
    shell, with the first nonzero entry positive. Returns (witness or None,
    search_complete).
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    nmax = config.RATIONAL_NMAX if nmax is None else nmax
    max_candidates = config.RATIONAL_MAX_CANDIDATES if max_candidates is None else max_candidates
    phi = np.asarray(angles, dtype=float)
    if phi.size == 0:
        return None, True
    threshold = tol * (1.0 + float(np.max(np.abs(phi))))
    visited = 0
    for level in range(1, nmax + 1):
        for n in itertools.product(range(-level, level + 1), repeat=phi.size):
            visited += 1
            if visited > max_candidates:
                logger.warning("rational dependence search truncated after %d candidates", max_candidates)
                return None, False
            if max(abs(k) for k in n) != level:
                continue
            if next(k for k in n if k != 0) < 0:
                continue
            if abs(float(np.dot(n, phi))) <= threshold:
                return tuple(int(k) for k in n), True
    return None, True


def invariant_set_descriptor(dd: DriftDiffusion, tol: float | None = None, *, nmax: int | None = None,
                             verdict: ExistenceVerdict | None = None) -> InvariantSetDescriptor:
    """Structure of the set of normal invariant states.

    Raises:
        HypothesisViolation: no invariant state exists.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    verdict = verdict if verdict is not None else decide_existence(dd, tol)
    if not verdict.exists:
        raise HypothesisViolation(verdict.reason.value, f"no invariant state: {verdict.reason.value}")
    nf = verdict.normal_form
    stationary = stationary_gaussian(nf.Z_minus, nf.C_minus, nf.zeta_minus, tol)
    witness, complete = rational_dependence(nf.Phi, nmax, tol)
    return InvariantSetDescriptor(
        d0=nf.d0,
        angles=tuple(float(abs(p)) for p in nf.Phi),
        signed_angles=tuple(float(p) for p in nf.Phi),
        zero_angle_count=int(np.sum(nf.Phi == 0)),
        rational_dependence_flag=witness is not None,
        witness=witness,
        stationary=stationary,
        faithful=is_faithful(stationary, tol),
        irreducible=is_irreducible(dd, tol),
        type_I_factor=True,
        center_dimension=center_dimension(verdict.split, tol),
        rational_search_complete=complete,
        normal_form=nf,
    )


def ground_state_flag(dd: DriftDiffusion, tol: float | None = None) -> bool:
    """Whether a purely Hamiltonian quadratic model has a ground state.

    Raises:
        NotApplicable: C ≠ 0, or Z is not a Hamiltonian generator.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    if fro(dd.C) > tol * (1.0 + fro(dd.Z)):
        raise NotApplicable("diffusion C is nonzero")
    if not is_hamiltonian_generator(dd.Z, tol):
        raise NotApplicable("drift is not a Hamiltonian generator")
    verdict = decide_existence(dd, tol)
    if not verdict.exists:
        return False
    Phi = verdict.normal_form.Phi
    return bool(np.all(Phi >= -tol * (1.0 + np.max(np.abs(Phi), initial=0.0))))


def recurrence_classification(descriptor: InvariantSetDescriptor,
                              purity_tol: float | None = None) -> RecurrenceClassification:
    """Support defect of the stationary factor: symplectic eigenvalues equal to 1."""
    purity_tol = config.PURITY_TOL if purity_tol is None else purity_tol
    Sigma = descriptor.stationary.covariance
    if Sigma.shape[0] == 0:
        return RecurrenceClassification(positive_recurrent_dim_defect=0, transient_dim=0)
    nu = williamson(Sigma).nu
    defect = int(np.sum(nu <= 1.0 + purity_tol))
    return RecurrenceClassification(positive_recurrent_dim_defect=defect, transient_dim=defect)


def ergodic_projection(dd: DriftDiffusion, m0, Sigma0, tol: float | None = None, *,
                       verdict: ExistenceVerdict | None = None) -> GaussianParams:
    """Cesàro limit of the Gaussian state started at (m0, Σ0).

    In normal-form coordinates the stable block relaxes to (m∞, Σ∞); on the
    rotation block the mean keeps its projection on ker Z̃₀ (around the fixed
    point p of Z̃₀ᵀp = -ζ̃₀) and the covariance keeps the part commuting with
    the rotation; cross covariances vanish.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    verdict = verdict if verdict is not None else decide_existence(dd, tol)
    if not verdict.exists:
        raise HypothesisViolation(verdict.reason.value, f"no invariant state: {verdict.reason.value}")
    nf = verdict.normal_form
    d, d0 = dd.d, nf.d0
    m0 = np.asarray(m0, dtype=float).reshape(-1)
    Sigma0 = np.asarray(Sigma0, dtype=float)
    if m0.shape != (2 * d,) or Sigma0.shape != (2 * d, 2 * d):
        raise ShapeError(f"initial state must have shapes ({2 * d},) and ({2 * d}, {2 * d})")

    M = nf.M
    M_inv = np.linalg.inv(M)
    m_tilde = M_inv.T @ m0
    S_tilde = M_inv.T @ Sigma0 @ M_inv
    idx0, idx_minus = mode_indices(d, d0)

    mean = np.zeros(2 * d)
    cov = np.zeros((2 * d, 2 * d))
    stationary = stationary_gaussian(nf.Z_minus, nf.C_minus, nf.zeta_minus, tol)
    mean[idx_minus] = stationary.mean
    cov[np.ix_(idx_minus, idx_minus)] = stationary.covariance

    if d0:
        p = -2.0 * nf.w_center[idx0]
        kernel = np.concatenate([nf.Phi == 0, nf.Phi == 0])
        mean0 = p.copy()
        mean0[kernel] += (m_tilde[idx0] - p)[kernel]
        mean[idx0] = mean0

        # Z̃₀ᵀ is skew, hence unitarily diagonalisable by its complex Schur form
        T, Q = scipy.linalg.schur(nf.Z0.T.astype(complex), output="complex")
        mu = np.diag(T)
        keep = np.abs(mu[:, None] - mu[None, :]) <= tol * (1.0 + np.max(np.abs(mu)))
        inner = Q.conj().T @ S_tilde[np.ix_(idx0, idx0)] @ Q
        cov[np.ix_(idx0, idx0)] = (Q @ (inner * keep) @ Q.conj().T).real

    cov = 0.5 * (cov + cov.T)
    return GaussianParams(mean=M.T @ mean, covariance=M.T @ cov @ M)


__all__ = [
    "mode_indices",
    "block_pairs",
    "normal_form",
    "decide_existence",
    "stationary_gaussian",
    "is_faithful",
    "is_irreducible",
    "is_stationary",
    "rational_dependence",
    "invariant_set_descriptor",
    "ground_state_flag",
    "recurrence_classification",
    "ergodic_projection",
]
