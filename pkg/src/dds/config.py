"""Run configuration: defaults < $DDS_PI_DIGITS < config file < command-line flags.

The config file is line oriented ``key = value`` with ``#`` comments.  It is
read from ``./dds.conf`` if present, otherwise from ``$DDS_CONFIG``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

PRECISIONS = ("fast", "extended")
FORMATS = ("table", "json", "csv")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    precision: str = "extended"
    format: str = "table"
    out_path: str | None = None
    cache_dir: str | None = None
    pi_digits_path: str | None = None
    no_cache: bool = False

    def __post_init__(self):
        if self.precision not in PRECISIONS:
            raise ConfigError(f"precision must be one of {PRECISIONS}, got {self.precision!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")


def parse_config_text(text: str, source: str = "<config>") -> dict:
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key == "no_cache":
            out[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            out[key] = value or None
    return out


def config_file(cwd: Path | None = None, env=None) -> Path | None:
    env = os.environ if env is None else env
    local = (cwd or Path.cwd()) / "dds.conf"
    if local.is_file():
        return local
    if env.get("DDS_CONFIG"):
        path = Path(env["DDS_CONFIG"])
        if not path.is_file():
            raise ConfigError(f"DDS_CONFIG points at a missing file: {path}")
        return path
    return None


def load_config(overrides: dict | None = None, cwd: Path | None = None, env=None) -> RunConfig:
    env = os.environ if env is None else env
    cfg = RunConfig()
    if env.get("DDS_PI_DIGITS"):
        cfg = replace(cfg, pi_digits_path=env["DDS_PI_DIGITS"])
    path = config_file(cwd, env)
    if path is not None:
        cfg = replace(cfg, **parse_config_text(path.read_text(), str(path)))
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg


def default_cache_dir(env=None) -> Path:
    env = os.environ if env is None else env
    base = env.get("XDG_CACHE_HOME") or str(Path.home() / ".cache")
    return Path(base) / "dds"
