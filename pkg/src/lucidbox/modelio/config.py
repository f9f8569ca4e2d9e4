"""Application configuration: flat ``key = value`` text, ``#`` comments.

Relative paths resolve against the config file's directory. Unknown keys
warn but do not fail, so configs stay forward compatible.
"""

from __future__ import annotations

import logging
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError

log = logging.getLogger(__name__)

_KNOWN_KEYS = ("checkpoint", "labels", "bind", "port", "temp_root",
               "session_ttl_secs")

DEFAULT_BIND = "127.0.0.1"
DEFAULT_PORT = 5000
DEFAULT_TTL_SECS = 3600


def default_temp_root() -> Path:
    return Path(tempfile.gettempdir()) / "lucidbox-sessions"


@dataclass
class AppConfig:
    checkpoint: Path
    labels: Path | None = None
    bind: str = DEFAULT_BIND
    port: int = DEFAULT_PORT
    temp_root: Path = field(default_factory=default_temp_root)
    session_ttl_secs: int = DEFAULT_TTL_SECS

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"port must be in [1, 65535], got {self.port}")
        if self.session_ttl_secs < 1:
            raise ConfigError(f"session_ttl_secs must be positive, "
                              f"got {self.session_ttl_secs}")
        if not Path(self.checkpoint).is_file():
            raise ConfigError(f"checkpoint path does not exist: {self.checkpoint}")
        if self.labels is not None and not Path(self.labels).is_file():
            raise ConfigError(f"labels path does not exist: {self.labels}")


def _parse_lines(text: str, source: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', "
                              f"got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def _int_value(values: dict[str, str], key: str, default: int, source: str) -> int:
    if key not in values:
        return default
    try:
        return int(values[key])
    except ValueError:
        raise ConfigError(f"{source}: {key} must be an integer, "
                          f"got {values[key]!r}") from None


def load_config(path) -> AppConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values = _parse_lines(text, str(path))
    for key in values:
        if key not in _KNOWN_KEYS:
            log.warning("%s: unknown config key %r ignored", path, key)
    if "checkpoint" not in values:
        raise ConfigError(f"{path}: missing required key 'checkpoint'")
    base = path.resolve().parent

    def resolve(p: str) -> Path:
        return (base / p).resolve() if not Path(p).is_absolute() else Path(p)

    return AppConfig(
        checkpoint=resolve(values["checkpoint"]),
        labels=resolve(values["labels"]) if "labels" in values else None,
        bind=values.get("bind", DEFAULT_BIND),
        port=_int_value(values, "port", DEFAULT_PORT, str(path)),
        temp_root=(resolve(values["temp_root"]) if "temp_root" in values
                   else default_temp_root()),
        session_ttl_secs=_int_value(values, "session_ttl_secs", DEFAULT_TTL_SECS,
                                    str(path)),
    )
