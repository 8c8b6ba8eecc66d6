# gqms_model.py
"""Phase-space data (Z, C, ζ) of a Gaussian quantum Markov semigroup.

The GKSL data are a quadratic Hamiltonian (number-conserving part Ω,
squeezing part κ, linear drive ζ) and jump operators linear in the
annihilation and creation operators, with coefficient rows in V and U.
They determine
    Z = embed((UᵀŪ − VᵀV̄)/2 + iΩ,  (UᵀV − VᵀU)/2 + iκ)
    C = embed(UᵀŪ + VᵀV̄,          UᵀV + VᵀU)
and ζ ↦ (Re ζ, Im ζ). The real-inner-product adjoint is the transpose.
"""
import logging

import numpy as np

import config
from models.domain_models import DriftDiffusion, GkslSpec, RealLinearOp
from services.exceptions import InvalidModel, NotSymplectic, ShapeError
from services.symplectic_core import (
    as_phase_matrix,
    embed_real_linear,
    embed_vector,
    is_symplectic,
    standard_form,
)
from utils.linalg import fro, sym

logger = logging.getLogger(__name__)


def _complex_matrix(a, field: str, shape=None) -> np.ndarray:
    try:
        a = np.atleast_2d(np.asarray(a, dtype=complex))
    except (TypeError, ValueError) as e:
        raise ShapeError(f"not a complex matrix ({e})", field=field) from e
    if a.ndim != 2:
        raise ShapeError(f"must be a matrix, got {a.ndim} dimensions", field=field)
    if shape is not None and a.shape != shape:
        raise ShapeError(f"expected shape {shape}, got {a.shape}", field=field)
    if not np.all(np.isfinite(a)):
        raise InvalidModel("contains non-finite entries", field=field)
    return a


def make_gksl_spec(Omega, kappa, zeta, U, V, tol: float | None = None) -> GkslSpec:
    """Validate GKSL coefficients and symmetrize them exactly.

    Raises:
        ShapeError: inconsistent shapes.
        InvalidModel: Ω not Hermitian, κ not symmetric, or more than 2d jump operators.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    Omega = _complex_matrix(Omega, "Omega")
    d = Omega.shape[0]
    if d == 0 or Omega.shape != (d, d):
        raise ShapeError(f"must be a nonempty square matrix, got {Omega.shape}", field="Omega")
    kappa = _complex_matrix(kappa, "kappa", (d, d))
    zeta = np.asarray(zeta, dtype=complex).reshape(-1)
    if zeta.shape != (d,):
        raise ShapeError(f"expected length {d}, got {zeta.shape[0]}", field="zeta")
    U = np.asarray(U, dtype=complex).reshape(-1, d) if np.size(U) else np.zeros((0, d), dtype=complex)
    V = np.asarray(V, dtype=complex).reshape(-1, d) if np.size(V) else np.zeros((0, d), dtype=complex)
    if U.shape[0] == 0 and V.shape[0]:
        U = np.zeros_like(V)
    if V.shape[0] == 0 and U.shape[0]:
        V = np.zeros_like(U)
    if U.shape != V.shape:
        raise ShapeError(f"U has shape {U.shape} but V has {V.shape}", field="V")
    if U.shape[0] > 2 * d:
        raise InvalidModel(f"{U.shape[0]} jump operators exceed 2d = {2 * d}", field="U")

    if fro(Omega - Omega.conj().T) > tol * (1.0 + fro(Omega)):
        raise InvalidModel("is not Hermitian", field="Omega")
    if fro(kappa - kappa.T) > tol * (1.0 + fro(kappa)):
        raise InvalidModel("is not symmetric", field="kappa")
    Omega = 0.5 * (Omega + Omega.conj().T)
    kappa = 0.5 * (kappa + kappa.T)
    return GkslSpec(Omega=Omega, kappa=kappa, zeta=zeta, U=U, V=V)


def make_drift_diffusion(Z, C, zeta, tol: float | None = None) -> DriftDiffusion:
    """Validate phase-space data; C is symmetrized after the tolerance check."""
    tol = config.DEFAULT_TOL if tol is None else tol
    Z = as_phase_matrix(Z, "Z")
    C = as_phase_matrix(C, "C")
    if C.shape != Z.shape:
        raise ShapeError(f"shape {C.shape} does not match Z {Z.shape}", field="C")
    zeta = np.asarray(zeta, dtype=float).reshape(-1)
    if zeta.shape != (Z.shape[0],):
        raise ShapeError(f"expected length {Z.shape[0]}, got {zeta.shape[0]}", field="zeta")
    if not np.all(np.isfinite(zeta)):
        raise InvalidModel("contains non-finite entries", field="zeta")
    if fro(C - C.T) > tol * (1.0 + fro(C)):
        raise InvalidModel("is not symmetric", field="C")
    return DriftDiffusion(Z=Z, C=sym(C), zeta=zeta)


def assemble(spec: GkslSpec, tol: float | None = None) -> DriftDiffusion:
    """Phase-space data of the semigroup generated by ``spec``."""
    tol = config.DEFAULT_TOL if tol is None else tol
    U, V = spec.U, spec.V
    Ut_Ubar = U.T @ U.conj()
    Vt_Vbar = V.T @ V.conj()
    Ut_V = U.T @ V
    Vt_U = V.T @ U
    Z = embed_real_linear(RealLinearOp(
        A1=0.5 * (Ut_Ubar - Vt_Vbar) + 1j * spec.Omega,
        A2=0.5 * (Ut_V - Vt_U) + 1j * spec.kappa,
    ))
    C = embed_real_linear(RealLinearOp(A1=Ut_Ubar + Vt_Vbar, A2=Ut_V + Vt_U))
    dd = DriftDiffusion(Z=Z, C=sym(C), zeta=embed_vector(spec.zeta))
    if not validate_admissibility(dd, tol):
        # cannot happen for valid specs; surfaces numerical trouble
        logger.warning("assembled data fails the admissibility test (d=%d)", spec.d)
    logger.debug("assembled d=%d m=%d", spec.d, spec.m)
    return dd


def hermitian_constraint(dd: DriftDiffusion) -> np.ndarray:
    """C_Z = C + i(ZᵀJ + JZ)."""
    J = standard_form(dd.d)
    return dd.C + 1j * (dd.Z.T @ J + J @ dd.Z)


def validate_admissibility(dd: DriftDiffusion, tol: float | None = None) -> bool:
    tol = config.DEFAULT_TOL if tol is None else tol
    cz = hermitian_constraint(dd)
    cz = 0.5 * (cz + cz.conj().T)
    scale = 1.0 + fro(dd.C) + fro(dd.Z)
    min_eig = float(np.linalg.eigvalsh(cz).min())
    logger.debug("admissibility min eigenvalue %.3e (scale %.3e)", min_eig, scale)
    return min_eig >= -tol * scale


def conjugate_symplectic(dd: DriftDiffusion, M, tol: float | None = None) -> DriftDiffusion:
    """Parameters of the conjugated semigroup: (MZM⁻¹, M⁻ᵀCM⁻¹, M⁻ᵀζ).

    Raises:
        NotSymplectic: if M fails is_symplectic.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    M = as_phase_matrix(M, "M")
    if M.shape != dd.Z.shape:
        raise ShapeError(f"shape {M.shape} does not match Z {dd.Z.shape}", field="M")
    if not is_symplectic(M, tol):
        raise NotSymplectic("M is not symplectic")
    M_inv = np.linalg.inv(M)
    return DriftDiffusion(
        Z=M @ dd.Z @ M_inv,
        C=sym(M_inv.T @ dd.C @ M_inv),
        zeta=M_inv.T @ dd.zeta,
    )


def displace_weyl(dd: DriftDiffusion, w) -> DriftDiffusion:
    """Parameters after conjugation by the Weyl operator W(w): ζ ← ζ − 2Zᵀw."""
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.shape != dd.zeta.shape:
        raise ShapeError(f"expected length {dd.zeta.shape[0]}, got {w.shape[0]}", field="w")
    return DriftDiffusion(Z=dd.Z, C=dd.C, zeta=dd.zeta - 2.0 * dd.Z.T @ w)


__all__ = [
    "make_gksl_spec",
    "make_drift_diffusion",
    "assemble",
    "hermitian_constraint",
    "validate_admissibility",
    "conjugate_symplectic",
    "displace_weyl",
]
