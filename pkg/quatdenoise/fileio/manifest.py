"""Run manifests: a TOML record written next to every command output."""

from __future__ import annotations

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import tomli_w

from quatdenoise import __version__
from quatdenoise.constants import MANIFEST_SUFFIX

logger = logging.getLogger(__name__)


def manifest_path(output: str | Path) -> Path:
    return Path(output).with_suffix(MANIFEST_SUFFIX)


@dataclass
class RunManifest:
    """What was run, with which settings, on which files, and how long it took.

    ``argv`` is the argument list that reproduces the run through
    ``quatdenoise replay``.
    """

    command: str
    argv: list[str]
    seed: int | None = None
    config: dict[str, Any] = field(default_factory=dict)
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    stage_seconds: dict[str, float] = field(default_factory=dict)
    metrics: dict[str, Any] = field(default_factory=dict)
    version: str = __version__

    @classmethod
    def from_toml(cls, path: Path) -> RunManifest:
        with open(path, "rb") as f:
            data = tomllib.load(f)
        return cls._from_dict(data)

    @classmethod
    def _from_dict(cls, data: dict[str, Any]) -> RunManifest:
        run = data.get("run", {})
        return cls(
            command=run.get("command", ""),
            argv=list(run.get("argv", [])),
            seed=run.get("seed"),
            version=run.get("version", ""),
            config=dict(data.get("config", {})),
            inputs=dict(data.get("inputs", {})),
            outputs=dict(data.get("outputs", {})),
            stage_seconds=dict(data.get("stage_seconds", {})),
            metrics=dict(data.get("metrics", {})),
        )

    def to_toml(self, path: Path) -> None:
        with open(path, "wb") as f:
            tomli_w.dump(self._to_dict(), f)
        logger.info("Wrote manifest %s", path)

    def _to_dict(self) -> dict[str, Any]:
        run: dict[str, Any] = {
            "command": self.command,
            "argv": list(self.argv),
            "version": self.version,
        }
        if self.seed is not None:
            run["seed"] = self.seed
        d: dict[str, Any] = {"run": run}
        # TOML has no null; empty tables are left out
        for name in ("config", "inputs", "outputs", "stage_seconds", "metrics"):
            table = {k: v for k, v in getattr(self, name).items() if v is not None}
            if table:
                d[name] = table
        return d
