"""
Shared exception definitions for the model/report stores.

Hierarchy:
- StoreError (base for all store exceptions)
  - ModelNotFound
  - ModelFileError (unreadable or schema-invalid model file)
  - ReportWriteError
"""


# =========================
# Base exception
# =========================

class StoreError(Exception):
    """Base exception for all store-related errors."""
    retryable: bool = True


class ModelNotFound(StoreError):
    retryable = False


class ModelFileError(StoreError):
    """Model file could not be parsed; `location` names the offending field."""
    retryable = False

    def __init__(self, path: str, message: str, *, location: str | None = None):
        where = f" at {location}" if location else ""
        super().__init__(f"{path}{where}: {message}")
        self.path = path
        self.location = location


class ReportWriteError(StoreError):
    retryable = True
