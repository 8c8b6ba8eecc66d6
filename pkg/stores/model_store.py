from abc import ABC, abstractmethod
from pathlib import Path

from models.file_models import ModelFile


# =========================
# ModelStore Interface
# =========================

class ModelStore(ABC):
    """
    Source of model files and sink for reports.

    Invariants:
    - list_models returns paths sorted by file name
    - load_model either returns a schema-valid ModelFile or raises
    - writes replace the target atomically
    """

    # -------------------------------------------------
    # Models
    # -------------------------------------------------

    @abstractmethod
    def list_models(self) -> list[Path]:
        """Model files available to a batch run, sorted by name.

        Raises:
            StoreError: If the source cannot be listed.
        """

    @abstractmethod
    def load_model(self, path: str | Path) -> ModelFile:
        """Parse and validate one model file.

        Raises:
            ModelNotFound: If the file does not exist.
            ModelFileError: If the file is not JSON or violates the schema.
        """

    # -------------------------------------------------
    # Outputs
    # -------------------------------------------------

    @abstractmethod
    def write_text(self, name: str, text: str) -> Path:
        """Write an output file and return its path.

        Raises:
            ReportWriteError: If the file cannot be written.
        """
