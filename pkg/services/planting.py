# planting.py
"""Random models with a known normal form.

A planted model is assembled in normal-form coordinates (rotation block on
the first modes, a random dissipative block on the rest), conjugated by a
random symplectic matrix and displaced by a random Weyl vector. The
obstruction generators plant exactly one failing existence condition.
"""
import logging

import numpy as np

from models.domain_models import DriftDiffusion, ExistenceReason, PlantedModel
from services.exceptions import ShapeError, SolverError
from services.gqms_model import assemble, conjugate_symplectic, displace_weyl, make_gksl_spec
from services.invariant import mode_indices
from services.symplectic_core import williamson

logger = logging.getLogger(__name__)

STABILITY_MARGIN = 0.05
MAX_TRIES = 50


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_stable_block(rng: np.random.Generator, n_modes: int) -> DriftDiffusion:
    """Admissible data of n_modes modes with spectral abscissa below -STABILITY_MARGIN."""
    if n_modes == 0:
        return DriftDiffusion(Z=np.zeros((0, 0)), C=np.zeros((0, 0)), zeta=np.zeros(0))
    for attempt in range(MAX_TRIES):
        X = _complex_normal(rng, (n_modes, n_modes))
        Y = 0.1 * _complex_normal(rng, (n_modes, n_modes))
        spec = make_gksl_spec(
            Omega=0.5 * (X + X.conj().T),
            kappa=0.5 * (Y + Y.T),
            zeta=_complex_normal(rng, n_modes),
            U=0.3 * _complex_normal(rng, (n_modes, n_modes)),
            V=0.5 * _complex_normal(rng, (n_modes, n_modes)) + 2.0 * np.eye(n_modes),
        )
        dd = assemble(spec)
        if np.max(np.linalg.eigvals(dd.Z).real) < -STABILITY_MARGIN:
            return dd
        logger.debug("stable block attempt %d rejected", attempt)
    raise SolverError(f"no stable block found in {MAX_TRIES} attempts")


def random_symplectic(rng: np.random.Generator, d: int) -> np.ndarray:
    """Symplectic matrix from the Williamson form of a random covariance."""
    X = rng.normal(size=(2 * d, 2 * d))
    return williamson(X @ X.T / (2 * d) + np.eye(2 * d)).M


def rotation_block(Phi) -> np.ndarray:
    """[[0, -Φ], [Φ, 0]] for signed angles Φ."""
    phi = np.diag(np.asarray(Phi, dtype=float))
    zero = np.zeros_like(phi)
    return np.block([[zero, -phi], [phi, zero]])


def _direct_sum(center: DriftDiffusion, stable: DriftDiffusion) -> DriftDiffusion:
    d0, n = center.d, stable.d
    d = d0 + n
    idx0, idx_minus = mode_indices(d, d0)
    Z = np.zeros((2 * d, 2 * d))
    C = np.zeros((2 * d, 2 * d))
    zeta = np.zeros(2 * d)
    for idx, part in ((idx0, center), (idx_minus, stable)):
        Z[np.ix_(idx, idx)] = part.Z
        C[np.ix_(idx, idx)] = part.C
        zeta[idx] = part.zeta
    return DriftDiffusion(Z=Z, C=C, zeta=zeta)


def _plant(rng: np.random.Generator, center: DriftDiffusion, n_stable: int, Phi, reason: ExistenceReason,
           displace: bool = True) -> PlantedModel:
    d = center.d + n_stable
    if d == 0:
        raise ShapeError("a planted model needs at least one mode", field="n_stable")
    reduced = _direct_sum(center, random_stable_block(rng, n_stable))
    N = random_symplectic(rng, d)
    w = rng.normal(size=2 * d) if displace else np.zeros(2 * d)
    dd = displace_weyl(conjugate_symplectic(reduced, N), w)
    return PlantedModel(
        dd=dd,
        reduced=reduced,
        conjugation=N,
        displacement=w,
        Phi=tuple(float(p) for p in Phi),
        n_stable=n_stable,
        expected_reason=reason,
    )


def planted_model(rng: np.random.Generator, angles, n_stable: int, *, zeta_scale: float = 1.0,
                  displace: bool = True) -> PlantedModel:
    """Model whose invariant states exist, with rotation angles ``angles`` (signed)."""
    Phi = np.asarray(angles, dtype=float).reshape(-1)
    d0 = Phi.size
    zeta0 = zeta_scale * rng.normal(size=2 * d0)
    zeta0[np.concatenate([Phi == 0, Phi == 0])] = 0.0
    center = DriftDiffusion(Z=rotation_block(Phi), C=np.zeros((2 * d0, 2 * d0)), zeta=zeta0)
    return _plant(rng, center, n_stable, Phi, ExistenceReason.OK, displace)


# =========================
# Obstruction families
# =========================

def jordan_obstruction(rng: np.random.Generator, n_stable: int = 1) -> PlantedModel:
    """Free-particle block [[0, 1], [0, 0]]: defective eigenvalue 0."""
    center = DriftDiffusion(Z=np.array([[0.0, 1.0], [0.0, 0.0]]), C=np.zeros((2, 2)), zeta=np.zeros(2))
    return _plant(rng, center, n_stable, (0.0,), ExistenceReason.NOT_SEMISIMPLE)


def noisy_rotation_obstruction(rng: np.random.Generator, angle: float = 1.0, noise: float = 0.5,
                               n_stable: int = 1) -> PlantedModel:
    """Undamped rotation with isotropic diffusion: V₀ leaves ker C."""
    center = DriftDiffusion(Z=rotation_block([angle]), C=noise * np.eye(2), zeta=np.zeros(2))
    return _plant(rng, center, n_stable, (angle,), ExistenceReason.V0_NOT_IN_KER_C)


def center_drift_obstruction(rng: np.random.Generator, drive: float = 1.0, n_stable: int = 1) -> PlantedModel:
    """Zero drift block with a constant drive: the mean moves linearly."""
    center = DriftDiffusion(Z=np.zeros((2, 2)), C=np.zeros((2, 2)), zeta=np.array([drive, 0.0]))
    return _plant(rng, center, n_stable, (0.0,), ExistenceReason.CENTER_OBSTRUCTION)


def amplifier_obstruction(rng: np.random.Generator, gain: float = 1.0, n_stable: int = 1) -> PlantedModel:
    """Phase-insensitive amplifier Z = gI, C = 2gI: spectrum in the right half plane."""
    center = DriftDiffusion(Z=gain * np.eye(2), C=2.0 * gain * np.eye(2), zeta=np.zeros(2))
    return _plant(rng, center, n_stable, (), ExistenceReason.H2_VIOLATED)


OBSTRUCTION_FAMILIES = {
    ExistenceReason.H2_VIOLATED: amplifier_obstruction,
    ExistenceReason.NOT_SEMISIMPLE: jordan_obstruction,
    ExistenceReason.V0_NOT_IN_KER_C: noisy_rotation_obstruction,
    ExistenceReason.CENTER_OBSTRUCTION: center_drift_obstruction,
}


__all__ = [
    "random_stable_block",
    "random_symplectic",
    "rotation_block",
    "planted_model",
    "jordan_obstruction",
    "noisy_rotation_obstruction",
    "center_drift_obstruction",
    "amplifier_obstruction",
    "OBSTRUCTION_FAMILIES",
]
