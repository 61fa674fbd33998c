"""Run configuration: defaults, file loading, overrides, and resolution."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

from .errors import ValidationError

DEFAULT_LETTER_SECONDS = 1.0
DEFAULT_MIN_PATTERN_SIZE = 3
DEFAULT_RADIUS_PERCENTILE = 0.5
DEFAULT_EPOCHS = 20
DEFAULT_SEED = 0
DEFAULT_N_BOOTSTRAP = 1000


def round_half_up(value: float) -> int:
    """Round to the nearest integer, halves away from zero-point-five up."""
    return int(math.floor(value + 0.5))


@dataclass(frozen=True)
class RunConfig:
    """Every knob a pipeline run depends on, with spec'd defaults.

    ``radius=None`` means estimate it from the data; ``target_rate_hz=None``
    means keep the input rate; ``dtw_window_seconds=None`` means one letter;
    ``channels=None`` means every channel column found in the trip files.
    """

    trips_dir: str
    metadata_path: str
    input_rate_hz: float
    out_dir: str
    channels: tuple[str, ...] | None = None
    target_rate_hz: float | None = None
    letter_seconds: float = DEFAULT_LETTER_SECONDS
    min_pattern_size: int = DEFAULT_MIN_PATTERN_SIZE
    radius: float | None = None
    radius_percentile: float = DEFAULT_RADIUS_PERCENTILE
    epochs: int = DEFAULT_EPOCHS
    dtw_window_seconds: float | None = None
    seed: int = DEFAULT_SEED
    test_driver: str | None = None
    n_bootstrap: int = DEFAULT_N_BOOTSTRAP

    def __post_init__(self) -> None:
        if self.input_rate_hz <= 0:
            raise ValidationError("input rate must be positive")
        if self.target_rate_hz is not None and self.target_rate_hz <= 0:
            raise ValidationError("target rate must be positive")
        if self.letter_seconds <= 0:
            raise ValidationError("letter seconds must be positive")
        if self.min_pattern_size < 1:
            raise ValidationError("minimum pattern size must be at least 1")
        if self.radius is not None and not self.radius > 0:
            raise ValidationError("radius must be positive")
        if not 0 <= self.radius_percentile <= 100:
            raise ValidationError("radius percentile must be in [0, 100]")
        if self.epochs < 1:
            raise ValidationError("epochs must be at least 1")
        if self.dtw_window_seconds is not None and self.dtw_window_seconds < 0:
            raise ValidationError("dtw window seconds must be non-negative")
        if self.n_bootstrap < 0:
            raise ValidationError("bootstrap rounds must be non-negative")
        if self.channels is not None:
            object.__setattr__(self, "channels", tuple(self.channels))
        if self.letter_size_samples < 1:
            raise ValidationError(
                f"letter of {self.letter_seconds} s at {self.effective_rate_hz} Hz "
                "resolves to zero samples"
            )

    @property
    def effective_rate_hz(self) -> float:
        return self.target_rate_hz if self.target_rate_hz is not None else self.input_rate_hz

    @property
    def letter_size_samples(self) -> int:
        return round_half_up(self.letter_seconds * self.effective_rate_hz)

    @property
    def dtw_window_samples(self) -> int:
        seconds = (
            self.dtw_window_seconds if self.dtw_window_seconds is not None else self.letter_seconds
        )
        return round_half_up(seconds * self.effective_rate_hz)

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        if self.channels is not None:
            out["channels"] = list(self.channels)
        return out


_REQUIRED = ("trips_dir", "metadata_path", "input_rate_hz", "out_dir")
_INT_FIELDS = {"min_pattern_size", "epochs", "seed", "n_bootstrap"}
_FLOAT_FIELDS = {
    "input_rate_hz",
    "target_rate_hz",
    "letter_seconds",
    "radius",
    "radius_percentile",
    "dtw_window_seconds",
}


def _coerce(name: str, value: Any) -> Any:
    if value is None:
        return None
    try:
        if name in _INT_FIELDS:
            return int(value)
        if name in _FLOAT_FIELDS:
            return float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"config field {name!r}: bad value {value!r}") from None
    if name == "channels":
        if isinstance(value, str):
            value = [c.strip() for c in value.split(",") if c.strip()]
        return tuple(value)
    return value


def load_config_values(path: str | Path) -> dict[str, Any]:
    """Key-value pairs from a config file; a manifest's config section works too."""
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: {exc}") from None
    if isinstance(data, dict) and isinstance(data.get("config"), dict):
        data = data["config"]
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: config must be a JSON object")
    return data


def build_config(*value_layers: Mapping[str, Any]) -> RunConfig:
    """Merge value layers (later wins, None values skipped) into a RunConfig."""
    known = {f.name for f in fields(RunConfig)}
    merged: dict[str, Any] = {}
    for layer in value_layers:
        for name, value in layer.items():
            if name not in known:
                raise ValidationError(f"unknown config field {name!r}")
            if value is not None:
                merged[name] = _coerce(name, value)
    missing = [name for name in _REQUIRED if name not in merged]
    if missing:
        raise ValidationError(f"missing required config fields: {missing}")
    return RunConfig(**merged)


def with_values(config: RunConfig, **updates: Any) -> RunConfig:
    return replace(config, **updates)
