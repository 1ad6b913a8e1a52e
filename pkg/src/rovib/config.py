"""Plain-text ``key=value`` configuration.

Keys are exactly the :class:`~rovib.params.PhysicalParams` field names, values
are SI. Blank lines and ``#`` comments are ignored. Later occurrences of a key
override earlier ones (with a warning) and command-line overrides win over the
file. ``detuning_value`` defaults to the resolved ``omega_phi``.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, InvalidParams, ParseError, UnitSanity, UnknownKey
from .params import DetuningMode, PhysicalParams

PARAM_FIELDS = tuple(f.name for f in dataclasses.fields(PhysicalParams))

# (key, upper bound, hint): values above the bound are probably in the wrong unit
_SANITY = (
    ("mass", 1e-3, "mass above 1 g; the unit is kg"),
    ("mirror_radius", 1e-1, "radius above 10 cm; the unit is m"),
    ("cavity_length", 1.0, "cavity longer than 1 m; the unit is m"),
    ("wavelength", 1e-4, "wavelength above 100 um; the unit is m"),
    ("input_power", 10.0, "input power above 10 W; the unit is W"),
)


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams
    output_path: str | None = None
    output_format: str = "csv"
    timestamp: bool = True
    threads: int | None = None
    deterministic: bool = True
    options: dict = field(default_factory=dict)

    def config_hash(self) -> str:
        return config_hash(self.params)


def config_hash(params: PhysicalParams) -> str:
    blob = json.dumps(params.as_dict(), sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _convert(key, raw, lineno=None):
    raw = raw.strip()
    try:
        if key == "oam_charge":
            value = float(raw)
            if not value.is_integer():
                raise ValueError
            return int(value)
        if key == "detuning_mode":
            return DetuningMode(raw.upper())
        return float(raw)
    except ValueError:
        raise ParseError(f"bad value {raw!r} for {key}", lineno) from None


def parse_lines(lines, source="<config>"):
    """Parse ``key=value`` lines into a dict of converted values."""
    values = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ParseError(f"expected key=value in {source}, got {text!r}", lineno)
        key, raw = (s.strip() for s in text.split("=", 1))
        if key not in PARAM_FIELDS:
            raise UnknownKey(f"{source} line {lineno}: unknown key {key!r}")
        if key in values:
            warnings.warn(f"{source} line {lineno}: duplicate key {key!r}, last value wins", UserWarning,
                          stacklevel=2)
        values[key] = _convert(key, raw, lineno)
    return values


def parse_overrides(pairs):
    values = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ParseError(f"override must be key=value, got {pair!r}")
        key, raw = (s.strip() for s in pair.split("=", 1))
        if key not in PARAM_FIELDS:
            raise UnknownKey(f"unknown key {key!r}")
        values[key] = _convert(key, raw)
    return values


def resolve_params(values: dict) -> PhysicalParams:
    values = dict(values)
    if "detuning_value" not in values:
        values["detuning_value"] = values.get("omega_phi", PhysicalParams.omega_phi)
    for key, bound, hint in _SANITY:
        if key in values and values[key] > bound:
            warnings.warn(f"{key}={values[key]!r}: {hint}", UnitSanity, stacklevel=2)
    try:
        return PhysicalParams(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(path=None, overrides=(), **run_options) -> RunConfig:
    """Build a validated :class:`RunConfig` from an optional file plus overrides."""
    values = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        values.update(parse_lines(text.splitlines(), source=str(path)))
    values.update(parse_overrides(overrides))
    try:
        params = resolve_params(values)
    except InvalidParams as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(params=params, **run_options)
