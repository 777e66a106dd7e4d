"""Structured results for individual checks and whole suite runs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

ARTIFACT_VERSION = "0.1.0"


def matrix_payload(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "d": m.shape[0],
        "re": [float(x) for x in m.real.reshape(-1)],
        "im": [float(x) for x in m.imag.reshape(-1)],
    }


@dataclass
class CheckReport:
    check: str
    passed: bool
    max_gap: float = 0.0
    phi: str | None = None
    d: int | None = None
    n: int | None = None
    trials: int = 1
    seed: int | None = None
    violations: list = field(default_factory=list)
    samples: int | None = None
    stderr: float | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "check": self.check,
            "phi": self.phi,
            "d": self.d,
            "n": self.n,
            "trials": self.trials,
            "violations": self.violations,
            "max_gap": float(self.max_gap),
            "seed": self.seed,
            "pass": bool(self.passed),
        }
        if self.samples is not None:
            out["samples"] = self.samples
        if self.stderr is not None:
            out["stderr"] = float(self.stderr)
        if self.details:
            out["details"] = self.details
        return out


@dataclass
class SuiteReport:
    version: str
    config: dict
    reports: list[CheckReport]
    skipped: list[str] = field(default_factory=list)
    wall_clock: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "reports": [r.to_dict() for r in sorted(self.reports, key=lambda r: r.check)],
            "skipped": sorted(self.skipped),
            "pass": self.passed,
            "wall_clock": self.wall_clock,
        }

    def comparable_dict(self) -> dict:
        """The report with timing and execution-only config fields
        stripped, for determinism comparisons across parallelism."""
        out = self.to_dict()
        out.pop("wall_clock", None)
        config = dict(out.get("config", {}))
        config.pop("jobs", None)
        config.pop("out", None)
        out["config"] = config
        return out
