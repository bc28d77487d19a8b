"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Unit tests for configuration loading
"""
from src.config import FALLBACK_CONFIG, OUTPUT_DIR_ENV, load_config, merge_overrides


def test_load_default_config(monkeypatch):
    """Test the shipped YAML file loads every section."""
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    config = load_config()
    for section in ("grid", "sampling", "estimators", "verification", "schwarzian",
                    "oracles", "planar", "report", "logging"):
        assert section in config
    assert config["estimators"]["kappa"] == 0.125
    assert config["report"]["output_dir"] == "./output"


def test_load_missing_config_falls_back(tmp_path, monkeypatch):
    """Test an unreadable file gives the built-in defaults."""
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    config = load_config(str(tmp_path / "missing.yaml"))
    assert config == FALLBACK_CONFIG
    assert config is not FALLBACK_CONFIG


def test_partial_config_keeps_defaults(tmp_path, monkeypatch):
    """Test a partial file only replaces the keys it sets."""
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    path = tmp_path / "small.yaml"
    path.write_text("grid:\n  n_points: 129\nsampling:\n  seed: 11\n")
    config = load_config(str(path))
    assert config["grid"]["n_points"] == 129
    assert config["sampling"]["seed"] == 11
    assert config["sampling"]["chunk_size"] == FALLBACK_CONFIG["sampling"]["chunk_size"]


def test_output_dir_from_environment(monkeypatch, tmp_path):
    """Test the environment variable overrides report.output_dir."""
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    assert load_config()["report"]["output_dir"] == str(tmp_path)


def test_merge_overrides_ignores_none():
    """Test None values leave the base value in place."""
    base = {"estimators": {"a": 1.0, "beta": 1.0}, "grid": {"n_points": 513}}
    merged = merge_overrides(base, {"estimators": {"a": 2.0, "beta": None}, "grid": None})
    assert merged == {"estimators": {"a": 2.0, "beta": 1.0}, "grid": {"n_points": 513}}
    assert base["estimators"]["a"] == 1.0


def test_merge_overrides_replaces_lists():
    """Test lists are replaced, not merged."""
    merged = merge_overrides({"verification": {"lemma1_a": [0.5, 1.0]}},
                             {"verification": {"lemma1_a": [2.0]}})
    assert merged["verification"]["lemma1_a"] == [2.0]
