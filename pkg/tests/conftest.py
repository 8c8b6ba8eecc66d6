import json
from pathlib import Path

import numpy as np
import pytest

import config
from models.domain_models import DriftDiffusion
from services.gqms_model import make_drift_diffusion
from stores import FileModelStore

GALLERY = Path(config.GALLERY_DIR)

ROTATION = np.array([[0.0, -1.0], [1.0, 0.0]])


def phase_model(Z, C, zeta=None) -> DriftDiffusion:
    Z = np.asarray(Z, dtype=float)
    return make_drift_diffusion(Z, C, np.zeros(Z.shape[0]) if zeta is None else zeta)


def free_beside_damped(gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """(Z, C) of a free mode and a mode damped at rate gamma, both rotating at frequency 1."""
    Z = np.zeros((4, 4))
    Z[0, 2], Z[2, 0] = -1.0, 1.0
    Z[1, 3], Z[3, 1] = -1.0, 1.0
    Z[1, 1] = Z[3, 3] = -gamma / 2
    return Z, np.diag([0.0, gamma, 0.0, gamma])


def model_document(name: str, Z, C, zeta=None, description: str = "") -> dict:
    Z = np.asarray(Z, dtype=float)
    return {
        "metadata": {"name": name, "description": description},
        "phase_space": {
            "Z": Z.tolist(),
            "C": np.asarray(C, dtype=float).tolist(),
            "zeta": list(np.zeros(Z.shape[0]) if zeta is None else np.asarray(zeta, dtype=float)),
        },
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def gallery_dir() -> Path:
    return GALLERY


@pytest.fixture
def gallery_model():
    store = FileModelStore()

    def load(stem: str):
        return store.load_model(GALLERY / f"{stem}.json")

    return load


@pytest.fixture
def damped() -> DriftDiffusion:
    return phase_model(-np.eye(2), 2.0 * np.eye(2))


@pytest.fixture
def thermal() -> DriftDiffusion:
    return phase_model(-np.eye(2), 6.0 * np.eye(2))


@pytest.fixture
def oscillator() -> DriftDiffusion:
    return phase_model(ROTATION, np.zeros((2, 2)))


@pytest.fixture
def oscillator_thermal() -> DriftDiffusion:
    Z = np.zeros((4, 4))
    Z[0, 2], Z[2, 0] = -1.0, 1.0
    Z[1, 1] = Z[3, 3] = -1.0
    return phase_model(Z, np.diag([0.0, 6.0, 0.0, 6.0]))


@pytest.fixture
def write_model(tmp_path):
    """Write a model document (dict or raw text) to tmp_path/<file> and return its path."""

    def write(file: str, document, directory: Path | None = None) -> Path:
        target = (directory or tmp_path) / file
        target.parent.mkdir(parents=True, exist_ok=True)
        text = document if isinstance(document, str) else json.dumps(document, ensure_ascii=False)
        target.write_text(text, encoding="utf-8")
        return target

    return write
