"""Test configuration state management."""

import json
import os
from pathlib import Path
from unittest.mock import patch

import pytest

from stabsim.config import WORKERS_ENV, Config, _default_config_dir
from stabsim.engine import EngineConfig
from stabsim.errors import ConfigError


@pytest.fixture
def temp_config_dir(tmp_path: Path) -> Path:
    return tmp_path / ".stabsim"


def test_config_initialization_defaults(temp_config_dir: Path):
    config = Config(config_dir=temp_config_dir)
    assert config.workers == 1
    assert config.seed == 0
    assert config.audit is False
    assert config.debug_mode is False
    assert config.oracle_max_qubits == 12


def test_config_post_init_sets_correct_path(temp_config_dir: Path):
    config = Config(config_dir=temp_config_dir)
    assert config.config_file == temp_config_dir / "stabsim.json"


def test_save_and_load_cycle(temp_config_dir: Path):
    config_save = Config(config_dir=temp_config_dir)
    config_save.workers = 6
    config_save.seed = 42
    config_save.audit = True
    config_save.save()

    assert config_save.config_file.exists()
    assert json.loads(config_save.config_file.read_text())["seed"] == 42

    config_load = Config(config_dir=temp_config_dir)
    config_load.load()
    assert (config_load.workers, config_load.seed, config_load.audit) == (6, 42, True)


def test_load_from_non_existent_file(temp_config_dir: Path):
    config = Config(config_dir=temp_config_dir)
    assert not config.config_file.exists()
    config.load()
    assert config.workers == 1


def test_load_from_corrupted_json(temp_config_dir: Path):
    temp_config_dir.mkdir()
    (temp_config_dir / "stabsim.json").write_text("this is not valid json")

    config = Config(config_dir=temp_config_dir)
    with pytest.raises(json.JSONDecodeError):
        config.load()


def test_load_ignores_unknown_and_path_keys(temp_config_dir: Path):
    temp_config_dir.mkdir()
    (temp_config_dir / "stabsim.json").write_text(
        json.dumps({"seed": 5, "provider": "glm", "config_dir": "/elsewhere"})
    )
    config = Config.load_or_default(config_dir=temp_config_dir)
    assert config.seed == 5
    assert config.config_dir == temp_config_dir
    assert not hasattr(config, "provider")


def test_update_method_changes_and_saves(temp_config_dir: Path):
    config = Config(config_dir=temp_config_dir)
    config.update(seed=9, debug_mode=True)

    assert config.seed == 9
    reloaded = Config.load_or_default(config_dir=temp_config_dir)
    assert reloaded.seed == 9
    assert reloaded.debug_mode is True


def test_workers_from_environment(temp_config_dir: Path, monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "8")
    assert Config(config_dir=temp_config_dir).workers == 8


def test_environment_wins_over_saved_file(temp_config_dir: Path, monkeypatch):
    Config(config_dir=temp_config_dir).update(workers=2)
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert Config.load_or_default(config_dir=temp_config_dir).workers == 3


@pytest.mark.parametrize("raw", ["many", "0", "-2"])
def test_malformed_worker_environment(temp_config_dir: Path, monkeypatch, raw):
    monkeypatch.setenv(WORKERS_ENV, raw)
    with pytest.raises(ConfigError):
        Config(config_dir=temp_config_dir)


def test_env_file_is_loaded(temp_config_dir: Path):
    temp_config_dir.mkdir()
    (temp_config_dir / ".env").write_text(f"# local\n{WORKERS_ENV}='5'\nnot a pair\n")
    with patch.dict("os.environ", {}, clear=False):
        config = Config(config_dir=temp_config_dir)
        assert os.environ[WORKERS_ENV] == "5"
    assert config.workers == 5


@pytest.mark.parametrize(
    ("key", "raw", "expected"),
    [
        ("workers", "4", 4),
        ("seed", "-3", -3),
        ("audit", "yes", True),
        ("debug_mode", "False", False),
        ("oracle_max_qubits", "10", 10),
    ],
)
def test_set_option_parses_and_saves(temp_config_dir: Path, key, raw, expected):
    Config(config_dir=temp_config_dir).set_option(key, raw)
    assert getattr(Config.load_or_default(config_dir=temp_config_dir), key) == expected


@pytest.mark.parametrize(
    ("key", "raw"),
    [
        ("provider", "glm"),
        ("audit", "maybe"),
        ("seed", "1.5"),
        ("workers", "0"),
        ("oracle_max_qubits", "-1"),
    ],
)
def test_set_option_rejects(temp_config_dir: Path, key, raw):
    config = Config(config_dir=temp_config_dir)
    with pytest.raises(ConfigError):
        config.set_option(key, raw)
    assert not config.config_file.exists()


def test_engine_config(temp_config_dir: Path):
    config = Config(config_dir=temp_config_dir, workers=3, seed=7, audit=True)
    assert config.engine_config() == EngineConfig(workers=3, seed=7, audit=True)


def test_update_writes_only_the_given_keys(temp_config_dir: Path, monkeypatch):
    Config(config_dir=temp_config_dir).update(workers=2)
    monkeypatch.setenv(WORKERS_ENV, "6")
    config = Config.load_or_default(config_dir=temp_config_dir)
    config.seed = 11
    config.update(audit=True)

    saved = json.loads(config.config_file.read_text())
    assert saved == {"workers": 2, "audit": True}
    assert config.workers == 6


def test_engine_config_overrides(temp_config_dir: Path):
    config = Config(config_dir=temp_config_dir, workers=3, seed=7)
    assert config.engine_config(workers=5) == EngineConfig(workers=5, seed=7)
    assert config.engine_config(seed=0) == EngineConfig(workers=3, seed=0)


def test_default_config_dir_logic():
    with patch.dict("os.environ", {"PYTEST_CURRENT_TEST": "true"}, clear=True):
        assert "stabsim-tests" in str(_default_config_dir())

    with patch.dict("os.environ", clear=True):
        with patch("stabsim.config.Path.home", return_value=Path("/fake/home")):
            assert _default_config_dir() == Path("/fake/home/.stabsim")
