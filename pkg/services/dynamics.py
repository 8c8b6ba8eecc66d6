# dynamics.py
"""Time evolution of Gaussian parameters, Weyl symbols and gap diagnostics.

Conventions: the mean evolves as dm/dt = Zᵀm + ζ and the covariance as
dΣ/dt = ZᵀΣ + ΣZ + C, so that

    m_t = E_tᵀ m₀ + h_t,      Σ_t = E_tᵀ Σ₀ E_t + G_t

with E_t = e^{tZ}, G_t = ∫₀ᵗ e^{sZᵀ} C e^{sZ} ds and h_t = ∫₀ᵗ e^{sZᵀ} ζ ds.
All three come from augmented matrix exponentials, never from quadrature.
"""
import logging
import math

import numpy as np
import scipy.integrate
import scipy.linalg

import config
from models.domain_models import (
    DriftDiffusion,
    ErgodicAverage,
    ExistenceVerdict,
    FiniteGap,
    GaussianParams,
    KmsGapResult,
    SpectralSplit,
    Trajectory,
    WeylSymbol,
)
from services.exceptions import (
    ContractionError,
    InadmissibleCovariance,
    InvalidModel,
    NotFaithful,
    ShapeError,
    SolverError,
)
from services.invariant import ergodic_projection, is_faithful
from services.symplectic_core import is_admissible_covariance, williamson
from utils.linalg import fro, orth, solve_lyapunov, sym

logger = logging.getLogger(__name__)

KMS_DOMAIN_MARGIN = 1e-12
MIN_ERGODIC_STEPS = 1000
_DECAY_GRID_POINTS = 60


# =========================
# Propagators
# =========================

def propagators(Z, C, zeta, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(E_t, G_t, h_t) for drift Z, diffusion C and drive ζ.

    The interval is halved until h‖Z‖ ≤ 1, the short-time blocks are read off
    expm(h·[[-Zᵀ, C], [0, Z]]) and expm(h·[[Zᵀ, ζ], [0, 0]]), and the result
    is doubled back up to t.
    """
    Z = np.asarray(Z, dtype=float)
    C = np.asarray(C, dtype=float)
    zeta = np.asarray(zeta, dtype=float).reshape(-1)
    n = Z.shape[0]
    if t < 0:
        raise InvalidModel(f"time must be nonnegative, got {t}", field="t")
    if t == 0 or n == 0:
        return np.eye(n), np.zeros((n, n)), np.zeros(n)

    norm = fro(Z)
    k = max(0, math.ceil(math.log2(t * norm))) if t * norm > 1.0 else 0
    h = t / 2 ** k

    van_loan = np.zeros((2 * n, 2 * n))
    van_loan[:n, :n] = -Z.T
    van_loan[:n, n:] = C
    van_loan[n:, n:] = Z
    drive = np.zeros((n + 1, n + 1))
    drive[:n, :n] = Z.T
    drive[:n, n] = zeta
    try:
        block = scipy.linalg.expm(h * van_loan)
        drive_block = scipy.linalg.expm(h * drive)
    except (ValueError, np.linalg.LinAlgError) as e:
        raise SolverError(f"matrix exponential failed: {e}") from e

    E = block[n:, n:]
    G = sym(E.T @ block[:n, n:])
    hv = drive_block[:n, n]
    for _ in range(k):
        G = sym(G + E.T @ G @ E)
        hv = hv + E.T @ hv
        E = E @ E
    return E, G, hv


def evolve_moments(dd: DriftDiffusion, m0, Sigma0, t_grid, tol: float | None = None) -> Trajectory:
    """Mean and covariance on ``t_grid``, stepped with cached per-step propagators.

    Raises:
        InadmissibleCovariance: Σ₀ + iJ is not positive semidefinite.
        InvalidModel: t_grid not nonnegative and nondecreasing.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    n = dd.Z.shape[0]
    m = np.asarray(m0, dtype=float).reshape(-1)
    Sigma = np.asarray(Sigma0, dtype=float)
    times = np.asarray(t_grid, dtype=float).reshape(-1)
    if m.shape != (n,) or Sigma.shape != (n, n):
        raise ShapeError(f"initial state must have shapes ({n},) and ({n}, {n})", field="m0")
    if times.size == 0 or times[0] < 0 or np.any(np.diff(times) < 0):
        raise InvalidModel("must be nonnegative and nondecreasing", field="t_grid")
    if not is_admissible_covariance(Sigma, tol):
        raise InadmissibleCovariance("Sigma0 + iJ is not positive semidefinite", field="Sigma0")
    Sigma = sym(Sigma)

    cache: dict[float, tuple] = {}

    def step(dt: float):
        key = float(f"{dt:.12g}")
        if key not in cache:
            cache[key] = propagators(dd.Z, dd.C, dd.zeta, dt)
        return cache[key]

    means, covariances = [], []
    current = 0.0
    for t in times:
        dt = t - current
        if dt > 0:
            E, G, h = step(dt)
            m = E.T @ m + h
            Sigma = sym(E.T @ Sigma @ E + G)
            current = t
        means.append(m.copy())
        covariances.append(Sigma.copy())
    logger.debug("evolved %d points with %d distinct steps", times.size, len(cache))
    return Trajectory(times=times, means=np.array(means), covariances=np.array(covariances))


def weyl_symbol(dd: DriftDiffusion, z, t: float) -> WeylSymbol:
    """Image of W(z) under the semigroup: amplitude · W(e^{tZ}z)."""
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.shape != dd.zeta.shape:
        raise ShapeError(f"expected length {dd.zeta.shape[0]}, got {z.shape[0]}", field="z")
    E, G, h = propagators(dd.Z, dd.C, dd.zeta, t)
    amplitude = complex(np.exp(-0.5 * z @ G @ z + 1j * (h @ z)))
    return WeylSymbol(z=z, amplitude=amplitude, evolved_z=E @ z)


# =========================
# Environment-induced decoherence
# =========================

def _decompose(split: SpectralSplit, z) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """z = z₁ + z₂ along V₀ ⊕ V₋; also returns the V₋ coefficients."""
    z = np.asarray(z, dtype=float).reshape(-1)
    V0, Vm = split.V0_basis, split.Vminus_basis
    basis = np.hstack([V0, Vm])
    if basis.shape != (z.size, z.size):
        raise ShapeError(f"splitting basis has shape {basis.shape} for a vector of length {z.size}", field="z")
    try:
        coeffs = np.linalg.solve(basis, z)
    except np.linalg.LinAlgError as e:
        raise SolverError(f"cannot decompose along V0 + V-: {e}") from e
    c0, cm = coeffs[:V0.shape[1]], coeffs[V0.shape[1]:]
    return V0 @ c0, Vm @ cm, cm


def decoherence_factor(dd: DriftDiffusion, split: SpectralSplit, z) -> complex:
    """Limit amplitude A(z₂, ∞) of the stable component of z."""
    _, _, cm = _decompose(split, z)
    Vm = split.Vminus_basis
    if cm.size == 0 or not np.any(cm):
        return 1.0 + 0.0j
    # Vm is orthonormal and Z-invariant: Z Vm = Vm K
    K = Vm.T @ dd.Z @ Vm
    gram = solve_lyapunov(K, sym(Vm.T @ dd.C @ Vm))
    try:
        integral = -np.linalg.solve(K, cm)
    except np.linalg.LinAlgError as e:
        raise SolverError(f"stable block is singular: {e}") from e
    exponent = -0.5 * cm @ gram @ cm + 1j * (dd.zeta @ (Vm @ integral))
    return complex(np.exp(exponent))


def eid_defect(dd: DriftDiffusion, split: SpectralSplit, z, t: float) -> float:
    """|amplitude(z, t) − A(z₂, ∞)·amplitude(z₁, t)|."""
    z1, _, _ = _decompose(split, z)
    full = weyl_symbol(dd, z, t).amplitude
    center = weyl_symbol(dd, z1, t).amplitude
    return float(abs(full - decoherence_factor(dd, split, z) * center))


def ergodic_mean(dd: DriftDiffusion, m0, Sigma0, T: float, n_steps: int = MIN_ERGODIC_STEPS,
                 tol: float | None = None, *, verdict: ExistenceVerdict | None = None) -> ErgodicAverage:
    """Trapezoid time average of the moments on [0, T] next to the Cesàro limit."""
    tol = config.DEFAULT_TOL if tol is None else tol
    if T <= 0:
        raise InvalidModel(f"horizon must be positive, got {T}", field="T")
    n_steps = max(int(n_steps), MIN_ERGODIC_STEPS)
    times = np.linspace(0.0, T, n_steps + 1)
    traj = evolve_moments(dd, m0, Sigma0, times, tol)
    avg_mean = scipy.integrate.trapezoid(traj.means, times, axis=0) / T
    avg_cov = sym(scipy.integrate.trapezoid(traj.covariances, times, axis=0) / T)
    predicted = ergodic_projection(dd, m0, Sigma0, tol, verdict=verdict)
    result = ErgodicAverage(
        avg_mean=avg_mean,
        avg_covariance=avg_cov,
        predicted_mean=predicted.mean,
        predicted_covariance=predicted.covariance,
        mean_deviation=float(np.linalg.norm(avg_mean - predicted.mean)),
        covariance_deviation=fro(avg_cov - predicted.covariance),
    )
    logger.info("ergodic mean T=%g deviations mean=%.3e cov=%.3e",
                T, result.mean_deviation, result.covariance_deviation)
    return result


# =========================
# Gap diagnostics
# =========================

def kms_function(x) -> np.ndarray:
    """csch(arccoth x) for x > 1, through arccoth x = ½ log1p(2/(x − 1))."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 1.0 + KMS_DOMAIN_MARGIN):
        raise NotFaithful("symplectic eigenvalue at or below 1")
    return 1.0 / np.sinh(0.5 * np.log1p(2.0 / (x - 1.0)))


def kms_gap_condition(Z_minus, Sigma_inf, tol: float | None = None) -> KmsGapResult:
    """Sign of -(Z₋ᵀK + KZ₋) with K = Mᵀ f(D) M from the Williamson form of Σ∞.

    Raises:
        NotFaithful: Σ∞ has a symplectic eigenvalue equal to 1.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    Z = np.asarray(Z_minus, dtype=float)
    Sigma = np.asarray(Sigma_inf, dtype=float)
    if Z.shape != Sigma.shape:
        raise ShapeError(f"Z_minus {Z.shape} and Sigma_inf {Sigma.shape} differ", field="Sigma_inf")
    if Z.shape[0] == 0:
        return KmsGapResult(holds=True, witness_min_eig=math.inf)
    if not is_faithful(GaussianParams(mean=np.zeros(Z.shape[0]), covariance=Sigma), tol):
        raise NotFaithful("stationary covariance is not faithful")
    w = williamson(Sigma, tol)
    K = w.M.T @ np.diag(kms_function(np.diag(w.D))) @ w.M
    witness = float(np.linalg.eigvalsh(-sym(Z.T @ K + K @ Z)).min())
    scale = (1.0 + fro(Z)) * (1.0 + fro(K))
    return KmsGapResult(holds=witness > tol * scale, witness_min_eig=witness)


def semigroup_gap_finite(A, E, tol: float | None = None) -> FiniteGap:
    """Form gap and sampled decay gap of e^{tA} on range(I − E).

    Raises:
        ContractionError: A is not dissipative, E is not an orthogonal
            projector, or A and E do not commute.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    E = np.zeros((n, n)) if np.size(E) == 0 else np.atleast_2d(np.asarray(E, dtype=float))
    if A.shape != (n, n) or E.shape != (n, n):
        raise ShapeError(f"A {A.shape} and E {E.shape} must be square of the same size", field="A")
    scale = 1.0 + fro(A)
    if np.linalg.eigvalsh(sym(A)).max() > tol * scale:
        raise ContractionError("A + Aᵀ is not negative semidefinite")
    if fro(E @ E - E) > tol * (1.0 + fro(E)) or fro(E - E.T) > tol * (1.0 + fro(E)):
        raise ContractionError("E is not an orthogonal projector")
    if fro(A @ E - E @ A) > tol * scale * (1.0 + fro(E)):
        raise ContractionError("A does not commute with E")

    Q = orth(np.eye(n) - E)
    if Q.shape[1] == 0:
        return FiniteGap(gap_form=math.inf, gap_decay=math.inf)
    gap_form = float(np.linalg.eigvalsh(Q.T @ (-sym(A)) @ Q).min())

    times = np.geomspace(1e-7, 10.0, _DECAY_GRID_POINTS) / max(np.linalg.norm(A, 2), 1.0)
    rates = []
    for t in times:
        growth = np.linalg.norm(scipy.linalg.expm(t * A) @ Q, 2)
        rates.append(-math.log(growth) / t)
    gap_decay = float(min(rates))
    logger.debug("finite gap: form=%.6g decay=%.6g", gap_form, gap_decay)
    return FiniteGap(gap_form=gap_form, gap_decay=gap_decay)


def decay_rate_estimate(Z_minus) -> float:
    """−max Re Sp(Z₋); +inf for an empty block."""
    Z = np.asarray(Z_minus, dtype=float)
    if Z.size == 0:
        return math.inf
    return float(-np.max(np.linalg.eigvals(Z).real))


__all__ = [
    "propagators",
    "evolve_moments",
    "weyl_symbol",
    "decoherence_factor",
    "eid_defect",
    "ergodic_mean",
    "kms_function",
    "kms_gap_condition",
    "semigroup_gap_finite",
    "decay_rate_estimate",
]
