# spectral.py
"""Spectral classification of the drift and the V₀ ⊕ V₋ splitting.

An eigenvalue is imaginary when |Re λ| ≤ tol·(1+‖Z‖). Before classifying,
eigenvalues closer than √tol·(1+‖Z‖) to each other and to the imaginary
axis are clustered: a defective eigenvalue of multiplicity k comes back from
the eigensolver split by O(ε^{1/k}), and the cluster mean recovers it to
O(ε). A cluster whose mean real part is off the axis sheds its outermost
member until the mean is back on it; shed members are classed by their own
real part, so a weakly damped eigenvalue next to an undamped one at the same
frequency stays stable. The algebraic multiplicity of an imaginary
eigenvalue is its cluster size; the geometric one is the kernel dimension of
Z − λI.
"""
import logging
import math

import numpy as np
import scipy.linalg

import config
from models.domain_models import (
    ExistenceReason,
    ImaginaryCluster,
    SpectralBlock,
    SpectralSplit,
    SpectrumReport,
)
from services.exceptions import HypothesisViolation, ShapeError, SolverError
from services.symplectic_core import as_phase_matrix, standard_form
from utils.linalg import fro, null_space, orth, same_subspace, unobservable_subspace

logger = logging.getLogger(__name__)


def _square(Z, phase_space: bool) -> np.ndarray:
    if phase_space:
        return as_phase_matrix(Z, "Z")
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1] or Z.shape[0] == 0:
        raise ShapeError(f"must be a nonempty square matrix, got {Z.shape}", field="A")
    if not np.all(np.isfinite(Z)):
        raise ShapeError("contains non-finite entries", field="A")
    return Z


def _thresholds(Z: np.ndarray, tol: float) -> tuple[float, float]:
    scale = 1.0 + fro(Z)
    return tol * scale, math.sqrt(tol) * scale


def _cluster(ev: np.ndarray, candidates: list[int], radius: float) -> list[list[int]]:
    """Single-linkage clusters of ev[candidates] at the given radius."""
    clusters: list[list[int]] = []
    for i in candidates:
        hits = [c for c in clusters if any(abs(ev[i] - ev[j]) <= radius for j in c)]
        merged = [i]
        for c in hits:
            merged.extend(c)
            clusters.remove(c)
        clusters.append(sorted(merged))
    return sorted(clusters, key=lambda c: c[0])


def _peel(ev: np.ndarray, members: list[int], threshold: float) -> tuple[list[int], list[int]]:
    """Drop the member with the most extreme real part until |mean Re| ≤ threshold."""
    kept, shed = list(members), []
    while kept:
        mean_re = float(np.mean(ev[kept].real))
        if abs(mean_re) <= threshold:
            break
        pick = min if mean_re < 0 else max
        extreme = pick(kept, key=lambda j: ev[j].real)
        kept.remove(extreme)
        shed.append(extreme)
    return kept, shed


def _imaginary_groups(ev: np.ndarray, members: list[int], threshold: float,
                      radius: float) -> tuple[list[list[int]], list[int]]:
    """Split one cluster into imaginary groups and the members shed off the axis."""
    kept, shed = _peel(ev, members, threshold)
    if not kept:
        return [], shed
    if not shed:
        return [kept], shed
    groups = []
    for sub in _cluster(ev, kept, radius):
        inner, inner_shed = _imaginary_groups(ev, sub, threshold, radius)
        groups.extend(inner)
        shed.extend(inner_shed)
    return groups, shed


def _kernel(Z: np.ndarray, lam: complex, atol: float) -> np.ndarray:
    if lam == 0:
        return null_space(Z, atol=atol)
    return null_space(Z - lam * np.eye(Z.shape[0]), atol=atol)


def classify_spectrum(Z, tol: float | None = None, *, phase_space: bool = True) -> SpectrumReport:
    """Partition Sp(Z) into negative, imaginary and positive real parts.

    Raises:
        ShapeError: Z not square (or, for phase-space data, of odd dimension).
        SolverError: the eigensolver failed.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    Z = _square(Z, phase_space)
    try:
        ev = np.linalg.eigvals(Z)
    except np.linalg.LinAlgError as e:
        raise SolverError(f"eigenvalue computation failed: {e}") from e
    ev = ev[np.lexsort((ev.imag, -ev.real))]
    threshold, radius = _thresholds(Z, tol)

    candidates = [i for i in range(ev.size) if abs(ev[i].real) <= radius]
    negative, imaginary, positive = [], [], []
    clusters = []
    groups = []
    for members in _cluster(ev, candidates, radius):
        kept, shed = _imaginary_groups(ev, members, threshold, radius)
        groups.extend(kept)
        for i in shed:
            (negative if ev[i].real < 0 else positive).append(i)
    for members in sorted(groups, key=lambda g: min(g)):
        mean = complex(np.mean(ev[members]))
        imaginary.extend(members)
        value = complex(0.0, 0.0 if abs(mean.imag) <= threshold else mean.imag)
        spread = max(abs(ev[j] - mean) for j in members)
        kernel = _kernel(Z, value, atol=max(threshold, 10.0 * spread))
        clusters.append(ImaginaryCluster(
            value=value, algebraic=len(members), geometric=kernel.shape[1], spread=spread,
        ))
    for i in range(ev.size):
        if i not in candidates:
            (negative if ev[i].real < 0 else positive).append(i)

    report = SpectrumReport(
        eigenvalues=ev,
        class_negative=tuple(sorted(negative)),
        class_imaginary=tuple(sorted(imaginary)),
        class_positive=tuple(sorted(positive)),
        satisfies_H2=not positive,
        imaginary_semisimple=all(c.semisimple for c in clusters),
        clusters=tuple(clusters),
    )
    logger.debug(
        "spectrum n=%d negative=%d imaginary=%d positive=%d semisimple=%s",
        ev.size, len(negative), len(imaginary), len(positive), report.imaginary_semisimple,
    )
    return report


def invariant_splitting(Z, tol: float | None = None, *, phase_space: bool = True) -> SpectralSplit:
    """Real bases of V₀ (imaginary spectrum) and V₋ (stable spectrum).

    Blocks are ordered by descending angle, ties kept in eigenvalue order.
    For a nonzero angle φ the V₀ columns are (Re w, Im w) per eigenvector w
    of iφ; the zero-angle block contributes a real kernel basis.

    Raises:
        HypothesisViolation: H2 fails or an imaginary eigenvalue is defective.
    """
    tol = config.DEFAULT_TOL if tol is None else tol
    Z = _square(Z, phase_space)
    report = classify_spectrum(Z, tol, phase_space=phase_space)
    if not report.satisfies_H2:
        raise HypothesisViolation(ExistenceReason.H2_VIOLATED.value, "spectrum has positive real parts")
    if not report.imaginary_semisimple:
        raise HypothesisViolation(ExistenceReason.NOT_SEMISIMPLE.value, "an imaginary eigenvalue is defective")

    threshold, _ = _thresholds(Z, tol)
    n = Z.shape[0]
    blocks = []
    for cluster in report.clusters:
        if cluster.value.imag < 0:
            continue
        vectors = _kernel(Z, cluster.value, atol=max(threshold, 10.0 * cluster.spread))
        if vectors.shape[1] != cluster.algebraic:
            raise SolverError(
                f"eigenspace of {cluster.value} has dimension {vectors.shape[1]}, expected {cluster.algebraic}"
            )
        if cluster.value.imag == 0:
            vectors = vectors.real
        blocks.append(SpectralBlock(angle=float(cluster.value.imag), vectors=vectors))
    blocks.sort(key=lambda b: -b.angle)

    columns, angles, zero_dim = [], [], 0
    for block in blocks:
        if block.angle == 0:
            columns.extend(block.vectors.T)
            zero_dim = block.vectors.shape[1]
            angles.extend([0.0] * (zero_dim // 2 if phase_space else zero_dim))
        else:
            for w in block.vectors.T:
                columns.extend([w.real, w.imag])
                angles.append(block.angle)
    V0 = np.column_stack(columns) if columns else np.zeros((n, 0))

    n_stable = len(report.class_negative)
    if n_stable:
        _, Q, sdim = scipy.linalg.schur(
            Z.astype(complex), output="complex", sort=lambda x, y=None: np.real(x) < -threshold
        )
        Q_s = Q[:, :sdim]
        Vminus = orth(np.hstack([Q_s.real, Q_s.imag]))
        if sdim != n_stable or Vminus.shape[1] != n_stable:
            raise SolverError(f"stable subspace has dimension {Vminus.shape[1]}, expected {n_stable}")
    else:
        Vminus = np.zeros((n, 0))

    if V0.shape[1] + Vminus.shape[1] != n:
        raise SolverError(f"splitting dimensions {V0.shape[1]} + {Vminus.shape[1]} != {n}")
    logger.debug("splitting: dim V0=%d dim V-=%d angles=%s", V0.shape[1], Vminus.shape[1], angles)
    return SpectralSplit(
        V0_basis=V0,
        Vminus_basis=Vminus,
        angles=tuple(angles),
        blocks=tuple(blocks),
        zero_dim=zero_dim,
    )


def df_subspace_general(Z, C, tol: float | None = None) -> np.ndarray:
    """Basis of the largest Z-invariant subspace of ker C."""
    tol = config.DEFAULT_TOL if tol is None else tol
    Z = as_phase_matrix(Z, "Z")
    C = as_phase_matrix(C, "C")
    if C.shape != Z.shape:
        raise ShapeError(f"shape {C.shape} does not match Z {Z.shape}", field="C")
    return unobservable_subspace(Z, C, rcond=tol)


def check_perif(Z, C, split: SpectralSplit, tol: float | None = None) -> bool:
    """V₀ ⊆ ker C and V₀ is the whole largest Z-invariant subspace of ker C."""
    tol = config.DEFAULT_TOL if tol is None else tol
    Z = as_phase_matrix(Z, "Z")
    C = as_phase_matrix(C, "C")
    V0 = split.V0_basis
    if V0.shape[1] and fro(C @ V0) > tol * (1.0 + fro(C)) * (1.0 + fro(V0)):
        return False
    df = df_subspace_general(Z, C, tol)
    if V0.shape[1] == 0:
        return df.shape[1] == 0
    return same_subspace(df, V0, math.sqrt(tol))


def center_dimension(split: SpectralSplit, tol: float | None = None) -> int:
    """Dimension of the radical of the symplectic form restricted to V₀."""
    tol = config.DEFAULT_TOL if tol is None else tol
    V0 = split.V0_basis
    if V0.shape[1] == 0:
        return 0
    Q = orth(V0)
    G = Q.T @ standard_form(V0.shape[0] // 2) @ Q
    return int(null_space(G, atol=math.sqrt(tol)).shape[1])


__all__ = [
    "classify_spectrum",
    "invariant_splitting",
    "df_subspace_general",
    "check_perif",
    "center_dimension",
]
