"""User-tunable visualizer settings: schema, validation, JSON serialization.

A schema drives both server-side validation and the browser's auto-generated
settings form, so it serializes to plain JSON (keys: key, type, default,
min, max, values, label).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import SettingsError, ValidationError

INT = "int"
FLOAT = "float"
ENUM = "enum"


@dataclass(frozen=True)
class SettingDef:
    key: str
    type: str
    default: int | float | str
    label: str
    minimum: int | float | None = None
    maximum: int | float | None = None
    values: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.type not in (INT, FLOAT, ENUM):
            raise ValidationError(f"setting {self.key!r}: unknown type {self.type!r}")
        if self.type == ENUM and not self.values:
            raise ValidationError(f"setting {self.key!r}: enum needs values")
        if self.type != ENUM and self.values is not None:
            raise ValidationError(f"setting {self.key!r}: only enums take values")

    def to_json(self) -> dict:
        return {"key": self.key, "type": self.type, "default": self.default,
                "min": self.minimum, "max": self.maximum,
                "values": list(self.values) if self.values else None,
                "label": self.label}


@dataclass(frozen=True)
class SettingsSchema:
    settings: tuple[SettingDef, ...]

    def __post_init__(self):
        keys = [s.key for s in self.settings]
        if len(set(keys)) != len(keys):
            raise ValidationError("settings schema has duplicate keys")
        for s in self.settings:
            _check_value(s, s.default)  # defaults must satisfy their own constraints

    def __iter__(self):
        return iter(self.settings)

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.settings]


def _check_value(setting: SettingDef, value):
    key = setting.key
    if setting.type == INT:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SettingsError(key, f"must be an integer, got {value!r}")
        if isinstance(value, float):
            if not value.is_integer():
                raise SettingsError(key, f"must be an integer, got {value!r}")
            value = int(value)
    elif setting.type == FLOAT:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SettingsError(key, f"must be a number, got {value!r}")
        value = float(value)
    else:
        if not isinstance(value, str) or value not in setting.values:
            allowed = ", ".join(setting.values)
            raise SettingsError(key, f"must be one of [{allowed}], got {value!r}")
        return value
    if setting.minimum is not None and value < setting.minimum:
        raise SettingsError(key, f"must be >= {setting.minimum}, got {value}")
    if setting.maximum is not None and value > setting.maximum:
        raise SettingsError(key, f"must be <= {setting.maximum}, got {value}")
    return value


def validate_settings(schema: SettingsSchema, values: dict) -> dict:
    """Apply defaults, coerce and range-check; unknown keys are rejected."""
    known = {s.key for s in schema}
    for key in values:
        if key not in known:
            raise SettingsError(key, "unknown setting")
    normalized = {}
    for setting in schema:
        if setting.key in values:
            normalized[setting.key] = _check_value(setting, values[setting.key])
        else:
            normalized[setting.key] = setting.default
    return normalized
