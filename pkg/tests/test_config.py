# tests/test_config.py
from pathlib import Path

import pytest

from utils.config import ALL_WEEKS, RunConfig, load_run_config, parse_weeks, settings
from utils.errors import ConfigError


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("1-9", set(range(1, 10))),
        ("1,3,5", {1, 3, 5}),
        ("1-4,7", {1, 2, 3, 4, 7}),
        (" 2 , 2 ", {2}),
    ],
)
def test_parse_weeks(raw, expected):
    assert parse_weeks(raw) == frozenset(expected)


@pytest.mark.parametrize("raw", ["", "0", "10", "1-10", "a-b", "3,x"])
def test_parse_weeks_rejects(raw):
    with pytest.raises(ConfigError):
        parse_weeks(raw)


def test_defaults():
    config = load_run_config()
    assert config.weeks == ALL_WEEKS
    assert config.threshold_d is None
    assert config.percentile == 0.95
    assert config.epsilon_peak == 1e-6
    assert config.min_plays == 0
    assert config.output_format == "csv"


def test_file_values_are_loaded(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("WEEKS=1-4\nTHRESHOLD_D=1.5\nMIN_PLAYS=10\nOUTPUT_FORMAT=JSON\n")
    config = load_run_config(path)
    assert config.weeks == frozenset({1, 2, 3, 4})
    assert config.threshold_d == 1.5
    assert config.min_plays == 10
    assert config.output_format == "json"


def test_flags_override_file(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("WEEKS=1-4\nPERCENTILE=0.9\nDATA_DIR=/data/a\n")
    config = load_run_config(path, {"weeks": "5", "data_dir": "/data/b"})
    assert config.weeks == frozenset({5})
    assert config.percentile == 0.9
    assert config.data_dir == Path("/data/b")


def test_empty_file_value_keeps_default(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("THRESHOLD_D=\n")
    assert load_run_config(path).threshold_d is None


def test_unknown_key_is_rejected(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("THRESHOLD=1.5\n")
    with pytest.raises(ConfigError):
        load_run_config(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "absent.env")


@pytest.mark.parametrize(
    "overrides",
    [
        {"percentile": 0.0},
        {"percentile": 1.0},
        {"threshold_d": -0.5},
        {"threshold_d": "abc"},
        {"epsilon_peak": -1.0},
        {"min_plays": -1},
        {"output_format": "xml"},
    ],
)
def test_invalid_values(overrides):
    with pytest.raises(ConfigError):
        load_run_config(overrides=overrides)


def test_config_hash_is_stable():
    a = RunConfig(weeks=frozenset({1, 2}), threshold_d=1.5)
    b = RunConfig(weeks=frozenset({2, 1}), threshold_d=1.5)
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != RunConfig(weeks=frozenset({1, 2}), threshold_d=1.6).config_hash()
    assert a.to_dict()["weeks"] == [1, 2]


def test_settings_defaults():
    assert settings.FIELD_LENGTH == 120.0
    assert settings.FRAME_RATE_HZ == 10.0
    assert "tackle" in settings.END_EVENTS
