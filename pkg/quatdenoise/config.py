"""TOML configuration loading and saving, noise-level defaults."""

from __future__ import annotations

import logging
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import tomli_w

from quatdenoise.constants import (
    CONFIG_FILENAME,
    DEFAULT_DELTA,
    DEFAULT_ROUNDS,
    DEFAULT_SEED,
    DEFAULT_SIGMA,
    DEFAULT_STRIDE,
    DEFAULT_WINDOW,
    DEFAULT_WORKERS,
    HIGH_SIGMA_DEFAULTS,
    LOW_SIGMA_DEFAULTS,
    SIGMA_SPLIT,
)
from quatdenoise.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass
class DenoiseConfig:
    """Parameters of the patch-group denoiser."""

    sigma: float = DEFAULT_SIGMA
    patch: int = LOW_SIGMA_DEFAULTS["patch"]     # w, patch side
    group: int = LOW_SIGMA_DEFAULTS["group"]     # n, patches per group
    rank: int = LOW_SIGMA_DEFAULTS["rank"]       # r
    rounds: int = DEFAULT_ROUNDS                 # K
    window: int = DEFAULT_WINDOW                 # search window side, pixels
    stride: int = DEFAULT_STRIDE                 # reference patch step
    delta: float = DEFAULT_DELTA                 # iterative regularization weight
    seed: int = DEFAULT_SEED

    @classmethod
    def for_sigma(cls, sigma: float) -> DenoiseConfig:
        """Defaults for a noise level: w/n/r switch at SIGMA_SPLIT."""
        preset = LOW_SIGMA_DEFAULTS if sigma < SIGMA_SPLIT else HIGH_SIGMA_DEFAULTS
        return cls(sigma=float(sigma), **preset)

    def validate(self) -> None:
        """Raise ConfigError on the first violated invariant."""
        if self.sigma < 0:
            raise ConfigError(f"sigma must be >= 0, got {self.sigma}")
        if self.patch < 2:
            raise ConfigError(f"patch size must be >= 2, got {self.patch}")
        if self.rank < 1:
            raise ConfigError(f"rank must be >= 1, got {self.rank}")
        if self.group < self.rank:
            raise ConfigError(f"group size {self.group} is smaller than rank {self.rank}")
        if self.rank > self.patch * self.patch:
            raise ConfigError(
                f"rank {self.rank} exceeds patch vector length {self.patch * self.patch}"
            )
        if self.window < self.patch:
            raise ConfigError(f"search window {self.window} is smaller than patch {self.patch}")
        if self.stride < 1:
            raise ConfigError(f"stride must be >= 1, got {self.stride}")
        if not 0.0 <= self.delta < 1.0:
            raise ConfigError(f"delta must lie in [0, 1), got {self.delta}")
        if self.rounds < 1:
            raise ConfigError(f"rounds must be >= 1, got {self.rounds}")


@dataclass
class RunConfig:
    """Top-level configuration: denoiser parameters plus execution settings."""

    denoise: DenoiseConfig = field(default_factory=DenoiseConfig)
    workers: int = DEFAULT_WORKERS
    config_path: Path | None = None

    @classmethod
    def from_toml(cls, path: Path) -> RunConfig:
        """Load configuration from a TOML file."""
        with open(path, "rb") as f:
            data = tomllib.load(f)
        return cls._from_dict(data, config_path=path)

    @classmethod
    def _from_dict(cls, data: dict[str, Any], config_path: Path | None = None) -> RunConfig:
        """Build config from a parsed TOML dict, σ-keyed defaults underneath."""
        section = data.get("denoise", {})
        if not isinstance(section, dict):
            raise ConfigError("[denoise] must be a table")
        _reject_unknown(section)
        section = _coerce_types(section)
        denoise = DenoiseConfig.for_sigma(section.get("sigma", DEFAULT_SIGMA))
        denoise = replace(denoise, **{k: v for k, v in section.items() if k != "workers"})
        return cls(
            denoise=denoise,
            workers=section.get("workers", DEFAULT_WORKERS),
            config_path=config_path,
        )

    def to_toml(self, path: Path) -> None:
        """Save configuration to a TOML file."""
        with open(path, "wb") as f:
            tomli_w.dump(self._to_dict(), f)

    def _to_dict(self) -> dict[str, Any]:
        """Convert config to a TOML-compatible dict."""
        d = self.denoise
        return {
            "denoise": {
                "sigma": d.sigma,
                "patch": d.patch,
                "group": d.group,
                "rank": d.rank,
                "rounds": d.rounds,
                "window": d.window,
                "stride": d.stride,
                "delta": d.delta,
                "seed": d.seed,
                "workers": self.workers,
            },
        }


_KNOWN_KEYS = {f.name for f in fields(DenoiseConfig)} | {"workers"}


def _reject_unknown(section: dict[str, Any]) -> None:
    unknown = sorted(set(section) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown [denoise] keys: {', '.join(unknown)}")


_FLOAT_KEYS = {"sigma", "delta"}


def _coerce_types(section: dict[str, Any]) -> dict[str, Any]:
    """Check value types; integers are accepted where a float is expected."""
    out = {}
    for key, value in section.items():
        if isinstance(value, bool):
            raise ConfigError(f"[denoise] {key} must be a number, got {value!r}")
        if key in _FLOAT_KEYS and isinstance(value, (int, float)):
            out[key] = float(value)
        elif key not in _FLOAT_KEYS and isinstance(value, int):
            out[key] = value
        else:
            kind = "a number" if key in _FLOAT_KEYS else "an integer"
            raise ConfigError(f"[denoise] {key} must be {kind}, got {value!r}")
    return out


def get_config_dir() -> Path:
    """Return the XDG config directory for quatdenoise.

    Uses $XDG_CONFIG_HOME/quatdenoise if set, otherwise ~/.config/quatdenoise.
    """
    xdg = os.environ.get("XDG_CONFIG_HOME")
    if xdg:
        return Path(xdg) / "quatdenoise"
    return Path.home() / ".config" / "quatdenoise"


def default_config_file() -> Path | None:
    """The user's default config file, if one exists."""
    path = get_config_dir() / CONFIG_FILENAME
    return path if path.is_file() else None


def resolve_config(config_file: Path | None, overrides: dict[str, Any]) -> RunConfig:
    """Merge flags > config file > σ-keyed defaults, then validate.

    ``overrides`` maps DenoiseConfig field names (and ``workers``) to flag
    values; None entries mean "not given".
    """
    overrides = {k: v for k, v in overrides.items() if v is not None}
    data: dict[str, Any] = {}
    if config_file is not None:
        with open(config_file, "rb") as f:
            try:
                data = tomllib.load(f)
            except tomllib.TOMLDecodeError as e:
                raise ConfigError(f"{config_file}: {e}") from e
        logger.info("Loaded config %s", config_file)
    section = data.get("denoise", {})
    if not isinstance(section, dict):
        raise ConfigError(f"{config_file}: [denoise] must be a table")
    section = dict(section)
    _reject_unknown(section)

    # An explicit sigma re-keys the defaults unless the file pins w/n/r.
    section.update(overrides)
    config = RunConfig._from_dict({"denoise": section}, config_path=config_file)
    config.denoise.validate()
    if config.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {config.workers}")
    return config
