"""Tool configuration: TOML file under `.smartdoc/`, overridable by CLI flags.

Precedence: built-in defaults < config file < explicit flags. The only
environment input is the API key.
"""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from smartdoc.errors import ConfigError
from smartdoc.javasrc.scan import DEFAULT_EXCLUDES

API_KEY_ENV = "SMARTDOC_API_KEY"
CONFIG_RELPATH = Path(".smartdoc") / "config.toml"


@dataclass
class Config:
    backend: str = "mock"
    endpoint: str = ""
    model: str = ""
    summary_model: str = ""   # defaults to `model` when empty
    temperature: float = 0.2
    max_retries: int = 3
    depth: int = 5
    summary_budget: int = 120
    prompt_budget: int = 6000
    concurrency: int = 4
    timeout: float = 60.0
    embedder: str = "mock"
    embed_endpoint: str = ""
    embed_model: str = ""
    min_methods: int = 10
    min_ref_tokens: int = 5
    raw_tokens: bool = False
    port: int = 7430
    ui_dir: str = ""
    include: tuple[str, ...] = ("**/*.java",)
    exclude: tuple[str, ...] = DEFAULT_EXCLUDES

    def validate(self) -> None:
        if self.backend not in ("mock", "http"):
            raise ConfigError(f"backend must be 'mock' or 'http', got {self.backend!r}")
        if self.embedder not in ("mock", "http"):
            raise ConfigError(f"embedder must be 'mock' or 'http', got {self.embedder!r}")
        if self.backend == "http":
            if not self.endpoint:
                raise ConfigError("backend 'http' requires an endpoint")
            if not self.model:
                raise ConfigError("backend 'http' requires a model name")
        if self.embedder == "http" and not self.embed_endpoint:
            raise ConfigError("embedder 'http' requires embed_endpoint")
        if self.max_retries < 1:
            raise ConfigError("max_retries must be >= 1")
        for name in ("depth", "summary_budget", "prompt_budget", "concurrency", "port",
                     "min_methods", "min_ref_tokens"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")


def api_key() -> str:
    return os.environ.get(API_KEY_ENV, "")


_FIELDS = {f.name: f for f in fields(Config)}


def _coerce(name: str, value):
    if name in ("include", "exclude"):
        if isinstance(value, (list, tuple)) and all(isinstance(v, str) for v in value):
            return tuple(value)
        raise ConfigError(f"{name} must be a list of strings")
    expected = _FIELDS[name].type
    if expected == "bool" and not isinstance(value, bool):
        raise ConfigError(f"{name} must be a boolean")
    if expected == "int" and (isinstance(value, bool) or not isinstance(value, int)):
        raise ConfigError(f"{name} must be an integer")
    if expected == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number")
        return float(value)
    if expected == "str" and not isinstance(value, str):
        raise ConfigError(f"{name} must be a string")
    return value


def load_config(
    project_root: str | Path,
    config_path: str | Path | None = None,
    overrides: dict | None = None,
) -> Config:
    """Build the effective config for a project, rejecting unknown keys."""
    values: dict = {}
    path = Path(config_path) if config_path else Path(project_root) / CONFIG_RELPATH
    if path.is_file():
        try:
            data = tomllib.loads(path.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
        for key, value in data.items():
            if key not in _FIELDS:
                raise ConfigError(f"unknown config key {key!r} in {path}")
            values[key] = _coerce(key, value)
    elif config_path is not None:
        raise ConfigError(f"config file not found: {path}")

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _FIELDS:
            raise ConfigError(f"unknown config override {key!r}")
        values[key] = _coerce(key, value)

    cfg = Config(**values)
    cfg.validate()
    return cfg
