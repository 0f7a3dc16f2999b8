"""Configuration state management."""

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

WORKERS_ENV = "STABSIM_WORKERS"

_SETTABLE = {
    "workers": int,
    "seed": int,
    "audit": bool,
    "debug_mode": bool,
    "oracle_max_qubits": int,
}


def _load_env_file(env_path: Path) -> dict[str, str]:
    if not env_path.exists():
        return {}
    env_vars = {}
    with open(env_path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, value = line.split("=", 1)
            env_vars[key.strip()] = value.strip().strip("'\"")
    return env_vars


def _default_config_dir() -> Path:
    if os.getenv("PYTEST_CURRENT_TEST"):
        return Path(tempfile.gettempdir()) / f"stabsim-tests-{os.getpid()}"
    return Path.home() / ".stabsim"


def _workers_from_env() -> int | None:
    raw = os.getenv(WORKERS_ENV)
    if raw is None or not raw.strip():
        return None
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV} must be >= 1, got {workers}")
    return workers


@dataclass
class Config:
    workers: int = 1
    seed: int = 0
    audit: bool = False
    debug_mode: bool = False
    oracle_max_qubits: int = 12
    config_dir: Path = field(default_factory=_default_config_dir)
    config_file: Path = field(init=False)

    def __post_init__(self) -> None:
        self.config_file = self.config_dir / "stabsim.json"
        for key, value in _load_env_file(self.config_dir / ".env").items():
            if key not in os.environ:
                os.environ[key] = value
        self._apply_env()

    def _apply_env(self) -> None:
        workers = _workers_from_env()
        if workers is not None:
            self.workers = workers

    def _saved(self) -> dict:
        if not self.config_file.exists():
            return {}
        with open(self.config_file, encoding="utf-8") as f:
            return json.load(f)

    def load(self) -> None:
        """Read saved settings; the environment still wins over the file."""
        for key, value in self._saved().items():
            if hasattr(self, key) and key not in ("config_dir", "config_file"):
                setattr(self, key, value)
        self._apply_env()

    def _write(self, data: dict) -> None:
        if not self.config_dir.exists():
            self.config_dir.mkdir(mode=0o700, parents=True, exist_ok=True)
        with open(self.config_file, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2)

    def save(self) -> None:
        self._write(self.to_dict())

    def update(self, **kwargs) -> None:
        """Set and persist only `kwargs`; other saved values stay as they are on disk."""
        saved = self._saved()
        for key, value in kwargs.items():
            if hasattr(self, key):
                setattr(self, key, value)
                saved[key] = value
        self._write(saved)

    def set_option(self, key: str, raw: str) -> None:
        """Parse `raw` into the type of field `key` and save."""
        if key not in _SETTABLE:
            raise ConfigError(f"unknown setting {key!r}; expected one of {', '.join(_SETTABLE)}")
        kind = _SETTABLE[key]
        if kind is bool:
            lowered = raw.strip().lower()
            if lowered not in ("true", "false", "1", "0", "yes", "no"):
                raise ConfigError(f"{key} expects true or false, got {raw!r}")
            value = lowered in ("true", "1", "yes")
        else:
            try:
                value = int(raw)
            except ValueError:
                raise ConfigError(f"{key} expects an integer, got {raw!r}") from None
            if key in ("workers", "oracle_max_qubits") and value < 1:
                raise ConfigError(f"{key} must be >= 1, got {value}")
        self.update(**{key: value})

    def to_dict(self) -> dict:
        return {
            "workers": self.workers,
            "seed": self.seed,
            "audit": self.audit,
            "debug_mode": self.debug_mode,
            "oracle_max_qubits": self.oracle_max_qubits,
        }

    def engine_config(self, workers: int | None = None, seed: int | None = None):
        """Engine settings, with per-run `workers` and `seed` taking precedence."""
        from .engine import EngineConfig

        return EngineConfig(
            workers=self.workers if workers is None else workers,
            seed=self.seed if seed is None else seed,
            audit=self.audit,
        )

    @classmethod
    def load_or_default(cls, **kwargs) -> "Config":
        config = cls(**kwargs)
        config.load()
        return config
