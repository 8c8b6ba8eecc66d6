# Abstractions
from .model_store import ModelStore

# Exceptions
from .exceptions import (
    StoreError,
    ModelNotFound,
    ModelFileError,
    ReportWriteError,
)

# Concrete implementation
from .file_model_store import FileModelStore

__all__ = [
    # Abstractions
    "ModelStore",
    "FileModelStore",
    # Exceptions
    "StoreError",
    "ModelNotFound",
    "ModelFileError",
    "ReportWriteError",
]
