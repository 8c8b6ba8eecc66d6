import json
import logging
import os
import tempfile
from pathlib import Path

from pydantic import ValidationError

from models.file_models import ModelFile
from .exceptions import ModelFileError, ModelNotFound, ReportWriteError, StoreError
from .model_store import ModelStore

logger = logging.getLogger(__name__)


def _location(error: dict) -> str:
    return ".".join(str(part) for part in error.get("loc", ()))


class FileModelStore(ModelStore):
    """Model files as `*.json` in a directory; outputs written next to each other in `out_dir`."""

    def __init__(self, model_dir: str | Path | None = None, out_dir: str | Path | None = None):
        self.model_dir = Path(model_dir) if model_dir is not None else None
        self.out_dir = Path(out_dir) if out_dir is not None else None
        logger.debug(f"[STORE] FileModelStore model_dir={self.model_dir} out_dir={self.out_dir}")

    # -------------------------------------------------
    # Models
    # -------------------------------------------------

    def list_models(self) -> list[Path]:
        if self.model_dir is None or not self.model_dir.is_dir():
            raise StoreError(f"{self.model_dir} is not a readable directory")
        try:
            paths = sorted(p for p in self.model_dir.iterdir() if p.is_file() and p.suffix == ".json")
        except OSError as e:
            raise StoreError(f"cannot list {self.model_dir}: {e}") from e
        logger.info(f"[STORE] found {len(paths)} model files in {self.model_dir}")
        return paths

    def load_model(self, path: str | Path) -> ModelFile:
        path = Path(path)
        if not path.is_file():
            raise ModelNotFound(f"{path} does not exist")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, UnicodeDecodeError) as e:
            raise ModelFileError(str(path), f"unreadable: {e}") from e
        except json.JSONDecodeError as e:
            raise ModelFileError(str(path), f"invalid JSON: {e.msg}", location=f"line {e.lineno}") from e
        try:
            return ModelFile.model_validate(raw)
        except ValidationError as e:
            first = e.errors()[0]
            raise ModelFileError(str(path), first["msg"], location=_location(first)) from e

    # -------------------------------------------------
    # Outputs
    # -------------------------------------------------

    def write_text(self, name: str, text: str) -> Path:
        target = (self.out_dir or Path(".")) / name
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            os.replace(tmp, target)
        except OSError as e:
            raise ReportWriteError(f"cannot write {target}: {e}") from e
        logger.debug(f"[STORE] wrote {target}")
        return target
