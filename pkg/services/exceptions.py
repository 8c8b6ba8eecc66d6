"""
Exception definitions for the numerical services.

Hierarchy:
- AnalysisError (base for all numerical errors)
  - input errors (ShapeError, InvalidModel, InadmissibleCovariance)
  - structural errors (HypothesisViolation and friends)
  - solver errors

Inputs are deterministic, so nothing here is worth retrying.
"""


# =========================
# Base exception
# =========================

class AnalysisError(Exception):
    """Base exception for all numerical analysis errors."""
    retryable: bool = False


# =========================
# Input errors
# =========================

class ShapeError(AnalysisError, ValueError):
    """Dimension or shape mismatch, e.g. an odd-dimensional phase-space matrix."""

    def __init__(self, message: str, *, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class InvalidModel(AnalysisError, ValueError):
    """GKSL or phase-space data violating its own invariants."""

    def __init__(self, message: str, *, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class InadmissibleCovariance(AnalysisError, ValueError):
    """A covariance violating Σ + iJ ⪰ 0."""

    def __init__(self, message: str, *, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class NotSymplectic(AnalysisError):
    pass


class NotPositiveDefinite(AnalysisError):
    pass


# =========================
# Structural errors
# =========================

class HypothesisViolation(AnalysisError):
    """A structural precondition fails; `reason` is an existence reason code."""

    def __init__(self, reason: str, message: str | None = None):
        super().__init__(message or reason)
        self.reason = reason


class SymplecticCompletionError(HypothesisViolation):
    """Normal-form completion failed on one block (an angle, or "stable")."""

    def __init__(self, block, message: str):
        super().__init__("V0_symplectic_degenerate", f"block {block}: {message}")
        self.block = block


class NotStable(AnalysisError):
    pass


class NotFaithful(AnalysisError):
    pass


class NotApplicable(AnalysisError):
    pass


class ContractionError(AnalysisError):
    pass


class SolverError(AnalysisError):
    #eigen/linear solver failures; re-running gives the same answer
    pass


__all__ = [
    "AnalysisError",
    "ShapeError",
    "InvalidModel",
    "InadmissibleCovariance",
    "NotSymplectic",
    "NotPositiveDefinite",
    "HypothesisViolation",
    "SymplecticCompletionError",
    "NotStable",
    "NotFaithful",
    "NotApplicable",
    "ContractionError",
    "SolverError",
]
