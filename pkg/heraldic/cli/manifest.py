from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Iterator, Sequence

from heraldic.internal import config_digest

__all__: Sequence[str] = ("RunManifest", "artifact_version")


def artifact_version() -> str:
    try:
        return version("heraldic")
    except PackageNotFoundError:
        return "0"


@dataclass
class RunManifest:
    """
    Provenance written alongside every command's output.

    Everything except `timings` is a pure function of the resolved
    configuration, so two runs of the same configuration agree on it.
    """

    command: str
    config_digest: str
    master_seed: int | None = None
    artifact_version: str = field(default_factory=artifact_version)
    timings: dict[str, float] = field(default_factory=dict)

    @classmethod
    def for_config(cls, command: str, config: Any, master_seed: int | None = None) -> RunManifest:
        return cls(command, config_digest(config), master_seed)

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        """Record the wall-clock seconds spent inside the block under `name`."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = self.timings.get(name, 0.0) + time.perf_counter() - start

    def to_json(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "config_digest": self.config_digest,
            "master_seed": self.master_seed,
            "artifact_version": self.artifact_version,
            "timings": dict(self.timings),
        }
