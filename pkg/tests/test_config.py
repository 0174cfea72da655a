"""Tests for input documents and settings"""

import pytest

from coxcat.core.config import (
    ComplexDocument,
    InputDocument,
    RunSettings,
    load_complex,
    load_input,
    load_settings,
)
from coxcat.core.errors import SchemaError


def test_input_document_fan_mode():
    """Test a valid fan-mode document"""
    doc = InputDocument(mode="fan", rank=2, rays=[[1, 0], [0, 1], [-1, -1]], cones=[[0, 1]])
    assert doc.rank == 2
    assert doc.multipliers is None


def test_input_document_decimal_strings():
    """Test integers written as decimal strings"""
    doc = InputDocument(mode="cox", degrees=[["1", "0"], [" -3", "1"]])
    assert doc.degrees == [[1, 0], [-3, 1]]


def test_input_document_rejects_ray_length():
    """Test rays must match the lattice rank"""
    with pytest.raises(ValueError):
        InputDocument(mode="fan", rank=2, rays=[[1, 0, 0]], cones=[[0]])


def test_input_document_cox_mode_needs_degrees():
    """Test cox mode without degrees is rejected"""
    with pytest.raises(ValueError):
        InputDocument(mode="cox")


def test_env_var_resolution(monkeypatch):
    """Test ${VAR} and ${VAR:-default} values"""
    monkeypatch.setenv("COXCAT_TEST_NAME", "hirzebruch")
    doc = InputDocument(mode="cox", name="${COXCAT_TEST_NAME}", degrees=[[1], [1]])
    assert doc.name == "hirzebruch"
    settings = RunSettings(nef_battery="${COXCAT_UNSET_BATTERY:-4}")
    assert settings.nef_battery == 4


def test_digest_is_stable():
    """Test equal documents have equal digests"""
    first = InputDocument(mode="cox", degrees=[[1], [1], [3]])
    second = InputDocument(mode="cox", degrees=[["1"], ["1"], ["3"]])
    assert first.digest() == second.digest()
    assert first.digest() != InputDocument(mode="cox", degrees=[[1], [1], [2]]).digest()


def test_run_settings_characteristic():
    """Test the characteristic must be zero or prime"""
    assert RunSettings(characteristic=7).characteristic == 7
    with pytest.raises(ValueError):
        RunSettings(characteristic=6)
    with pytest.raises(ValueError):
        RunSettings(characteristic=1)


def test_run_settings_merge_ignores_none():
    """Test CLI overrides leave unset values alone"""
    settings = RunSettings(nef_battery=3).merged(characteristic=None, order_seed=11)
    assert settings.nef_battery == 3
    assert settings.order_seed == 11
    with pytest.raises(SchemaError):
        settings.merged(characteristic=4)


def test_load_input_reports_yaml_position(tmp_path):
    """Test malformed YAML is a schema error with a position"""
    path = tmp_path / "bad.yaml"
    path.write_text("mode: fan\nrays: [[1, 0]\n")
    with pytest.raises(SchemaError, match="line"):
        load_input(path)


def test_load_input_reports_field(tmp_path):
    """Test validation errors name the offending field"""
    path = tmp_path / "bad.yaml"
    path.write_text("mode: fan\nrank: 2\nrays: [[1, x]]\ncones: [[0]]\n")
    with pytest.raises(SchemaError, match="rays"):
        load_input(path)


def test_load_input_missing_file(tmp_path):
    """Test a missing file is a schema error"""
    with pytest.raises(SchemaError, match="not found"):
        load_input(tmp_path / "nowhere.yaml")


def test_load_complex_accepts_wrapper(tmp_path):
    """Test a complex under a top-level 'complex' key"""
    path = tmp_path / "complex.yaml"
    path.write_text(
        "complex:\n"
        "  name: kernel\n"
        "  terms:\n"
        "    0: [{twist: [0, 0]}]\n"
        "    -1: [{twist: [-1, -1]}]\n"
        "  differentials:\n"
        "    -1: [['x0*x3 - x1*x2']]\n"
    )
    doc = load_complex(path)
    assert isinstance(doc, ComplexDocument)
    assert doc.terms[-1][0].twist == [-1, -1]
    assert doc.differentials[-1] == [["x0*x3 - x1*x2"]]


def test_load_settings_block(tmp_path):
    """Test the settings block of coxcat.yaml"""
    path = tmp_path / "coxcat.yaml"
    path.write_text("settings:\n  nef_battery: 2\n  logging:\n    level: debug\n")
    settings = load_settings(path)
    assert settings.nef_battery == 2
    assert settings.logging.level == "DEBUG"


def test_load_settings_defaults(tmp_path):
    """Test defaults when no settings file exists"""
    settings = load_settings(tmp_path / "absent.yaml")
    assert settings == RunSettings()
    assert settings.plugins is False
    assert settings.plugins_dir == "plugins"
