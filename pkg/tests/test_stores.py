import numpy as np
import pytest
from numpy.testing import assert_allclose

from commands.pipeline import build_drift_diffusion
from conftest import model_document
from models.file_models import complex_array
from services.exceptions import ShapeError
from stores import FileModelStore, ModelFileError, ModelNotFound, StoreError
from utils.formatting import sig, sig_array, sig_complex
from utils.validation import is_valid_name, safe_stem


def test_load_gallery_gksl(gallery_model):
    model = gallery_model("thermal_mode")
    assert model.gksl is not None
    dd = build_drift_diffusion(model)
    assert_allclose(dd.Z, -np.eye(2), atol=1e-14)
    assert_allclose(dd.C, 6.0 * np.eye(2), atol=1e-14)


def test_load_gallery_phase_space(gallery_model):
    model = gallery_model("zeta_drift")
    dd = build_drift_diffusion(model)
    assert_allclose(dd.zeta, [1.0, 0.0])


def test_missing_file(tmp_path):
    with pytest.raises(ModelNotFound):
        FileModelStore().load_model(tmp_path / "nope.json")


def test_invalid_json(write_model):
    path = write_model("broken.json", "{not json")
    with pytest.raises(ModelFileError) as err:
        FileModelStore().load_model(path)
    assert "invalid JSON" in str(err.value)
    assert err.value.location == "line 1"


def test_both_sections_rejected(write_model):
    document = model_document("both", -np.eye(2), 2.0 * np.eye(2))
    document["gksl"] = {"Omega": [[[0, 0]]]}
    with pytest.raises(ModelFileError) as err:
        FileModelStore().load_model(write_model("both.json", document))
    assert "exactly one" in str(err.value)


def test_unknown_key_rejected(write_model):
    document = model_document("extra", -np.eye(2), 2.0 * np.eye(2))
    document["phase_space"]["H"] = [[1.0]]
    with pytest.raises(ModelFileError) as err:
        FileModelStore().load_model(write_model("extra.json", document))
    assert err.value.location == "phase_space.H"


def test_ragged_matrix_rejected(write_model):
    document = model_document("ragged", -np.eye(2), 2.0 * np.eye(2))
    document["phase_space"]["Z"] = [[1.0, 0.0], [0.0]]
    with pytest.raises(ModelFileError):
        FileModelStore().load_model(write_model("ragged.json", document))


def test_invalid_name_rejected(write_model):
    document = model_document("bad/name", -np.eye(2), 2.0 * np.eye(2))
    with pytest.raises(ModelFileError) as err:
        FileModelStore().load_model(write_model("bad.json", document))
    assert err.value.location == "metadata.name"


def test_odd_dimension_reaches_shape_error(write_model):
    document = model_document("odd", -np.eye(3), np.eye(3))
    model = FileModelStore().load_model(write_model("odd.json", document))
    with pytest.raises(ShapeError) as err:
        build_drift_diffusion(model)
    assert err.value.field == "Z"


def test_list_models_sorted(tmp_path, write_model):
    for name in ("b.json", "a.json", "notes.txt"):
        write_model(name, "{}")
    paths = FileModelStore(tmp_path).list_models()
    assert [p.name for p in paths] == ["a.json", "b.json"]


def test_list_models_missing_dir(tmp_path):
    with pytest.raises(StoreError):
        FileModelStore(tmp_path / "missing").list_models()


def test_write_text_replaces(tmp_path):
    store = FileModelStore(out_dir=tmp_path / "out")
    store.write_text("r.json", "first\n")
    target = store.write_text("r.json", "second\n")
    assert target.read_text(encoding="utf-8") == "second\n"
    assert sorted(p.name for p in target.parent.iterdir()) == ["r.json"]


def test_complex_array_pairs():
    a = complex_array([[[1.0, 2.0], [0.0, -1.0]]], "Omega", 2)
    assert_allclose(a, [[1.0 + 2.0j, -1.0j]])
    with pytest.raises(ValueError):
        complex_array([[[1.0, 2.0, 3.0]]], "Omega", 2)


@pytest.mark.parametrize("name,ok", [
    ("thermal mode", True),
    ("oscillator ⊗ thermal mode", True),
    ("Oszillator (gedämpft)", True),
    ("", False),
    ("   ", False),
    ("a/b", False),
    ("x" * 201, False),
])
def test_is_valid_name(name, ok):
    assert is_valid_name(name) is ok


def test_safe_stem():
    assert safe_stem("oscillator ⊗ thermal mode") == "oscillator_thermal_mode"
    assert safe_stem("⊗") == "model"


def test_sig_rounding():
    assert sig(1.0 / 3.0, 3) == 0.333
    assert sig(-0.0) == 0.0
    assert sig(float("inf")) is None
    assert sig_complex(1.0 + 2.0j, 2) == [1.0, 2.0]
    assert sig_array(np.array([[1.23456, np.nan]]), 3) == [[1.23, None]]
