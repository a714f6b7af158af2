import pytest
from pydantic import ValidationError

from app.config import PROJECT_ROOT, AppConfig, Config, ToleranceSettings, config, tomllib
from app.exceptions import SpecParseError
from app.models.manifest import RunManifest, parse_tolerance_overrides
from app.schema import Command


def test_config_is_a_singleton():
    assert Config() is config


def test_default_tolerances():
    tol = ToleranceSettings()
    assert tol.pole_guard == 1e-9
    assert tol.critical_point == 1e-12
    assert tol.vanishing_denominator == 1e-14
    assert tol.zero_on_boundary == 1e-12
    assert tol.equality_snap == 1e-12


def test_example_file_covers_every_section():
    with (PROJECT_ROOT / "config" / "config.toml.example").open("rb") as f:
        raw = tomllib.load(f)
    assert set(raw) == set(AppConfig.model_fields)
    for section, settings in raw.items():
        model = AppConfig.model_fields[section].annotation
        assert set(settings) == set(model.model_fields), section


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("QCX_WORKERS", "7")
    monkeypatch.setenv("QCX_LOG_LEVEL", "debug")
    try:
        config.reload()
        assert config.run.workers == 7
        assert config.log.level == "DEBUG"
    finally:
        monkeypatch.delenv("QCX_WORKERS")
        monkeypatch.delenv("QCX_LOG_LEVEL")
        config.reload()
    assert config.run.workers == 4


def test_tolerance_overrides():
    assert parse_tolerance_overrides(["pole_guard=1e-6", "area_tail = 1e-4"]) == {
        "pole_guard": 1e-6,
        "area_tail": 1e-4,
    }
    with pytest.raises(SpecParseError):
        parse_tolerance_overrides(["pole_guard"])
    with pytest.raises(SpecParseError):
        parse_tolerance_overrides(["pole_guard=small"])


def test_manifest_merges_overrides(tmp_path):
    manifest = RunManifest(
        command=Command.AREA,
        output_dir=tmp_path / "out",
        tolerance_overrides={"equality_snap": 1e-9},
    )
    tol = manifest.tolerances()
    assert tol.equality_snap == 1e-9
    assert tol.pole_guard == config.tolerances.pole_guard
    assert manifest.prepare_output().is_dir()
    assert manifest.to_record()["command"] == "area"


def test_manifest_validation(tmp_path):
    with pytest.raises(ValidationError):
        RunManifest(command=Command.AREA, output_dir=tmp_path, workers=0)
    with pytest.raises(ValidationError):
        RunManifest(command=Command.AREA, output_dir=tmp_path, tolerance_overrides={"bogus": 1.0})
