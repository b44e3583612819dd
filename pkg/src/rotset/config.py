"""Run configuration: CLI flags, key-value config files, validation."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .maps import MapSpec
from .observable import DEFAULT_LENGTH, DEFAULT_SEED

OUTPUT_ENV = "ROTSET_OUTPUT_DIR"


def parse_key_values(text: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; dashes in keys become underscores."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "rotset-out"))


@dataclass
class RunConfig:
    command: str = ""
    map: str = "f1"
    # discretized / asymptotic
    n: int = 100
    n_min: int = 100
    n_max: int = 200
    step: int = 10
    # observable
    mode: str = "random"
    count: int = 1000
    length: int = DEFAULT_LENGTH
    seed: int = DEFAULT_SEED
    # mean
    quadrature: int = 1024
    # hull
    input: str = ""
    # reproduce
    figure: int = 0
    scale: float = 1.0
    full: bool = False
    # shared
    reference: str = ""
    tolerance: float = 0.05
    check: bool = False
    threads: int = 0
    out: str = ""
    name: str = ""
    plot: bool = True

    def validate(self) -> RunConfig:
        MapSpec.parse(self.map)
        positive = ["n", "n_min", "n_max", "step", "count", "length", "quadrature"]
        for key in positive:
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be >= 1, got {getattr(self, key)}")
        if self.n_min > self.n_max:
            raise ConfigError(f"n_min ({self.n_min}) exceeds n_max ({self.n_max})")
        if self.mode not in ("random", "grid"):
            raise ConfigError(f"mode must be 'random' or 'grid', got {self.mode!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")
        if self.scale <= 0 or self.tolerance < 0:
            raise ConfigError("scale must be > 0 and tolerance >= 0")
        if self.threads < 0:
            raise ConfigError("threads must be >= 0")
        return self

    @property
    def workers(self) -> int:
        return self.threads or os.cpu_count() or 1

    @property
    def output_dir(self) -> Path:
        return Path(self.out) if self.out else default_output_dir()

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_mapping(cls, values) -> RunConfig:
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, value in values.items():
            key = key.replace("-", "_")
            if key not in known:
                raise ConfigError(f"unknown configuration key {key!r}")
            kwargs[key] = _coerce(known[key].type, value, key)
        return cls(**kwargs)


def _coerce(type_name, value, key):
    if not isinstance(value, str):
        return value
    try:
        if type_name == "int":
            return int(value)
        if type_name == "float":
            return float(value)
        if type_name == "bool":
            lowered = value.lower()
            if lowered not in ("1", "0", "true", "false", "yes", "no", "on", "off"):
                raise ValueError(value)
            return lowered in ("1", "true", "yes", "on")
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None
    return value
