"""Versioned run reports shared by the CLI and the acceptance matrix."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__

SCHEMA = 1
MAX_WITNESSES = 10


def _plain(x):
    """Coerce numpy scalars, Fractions and tuples into JSON-friendly values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, int):
        return int(x)
    if isinstance(x, float):
        return float(x)
    if hasattr(x, "item"):
        return x.item()
    return str(x)


@dataclass
class Check:
    name: str
    passed: bool
    counts: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "counts": _plain(self.counts),
            "witnesses": _plain(self.witnesses[:MAX_WITNESSES]),
        }


@dataclass
class RunReport:
    command: list
    parameters: dict
    checks: list = field(default_factory=list)
    seed: int | None = None
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": __version__,
            "command": list(self.command),
            "parameters": _plain(self.parameters),
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "wall_time": round(self.wall_time, 6),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"psfield {__version__}: {' '.join(self.command)}"]
        if self.seed is not None:
            lines.append(f"seed {self.seed}")
        for c in self.checks:
            counts = ", ".join(f"{k}={v}" for k, v in _plain(c.counts).items())
            lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}" + (f"  ({counts})" if counts else ""))
            if not c.passed:
                for w in _plain(c.witnesses[:MAX_WITNESSES]):
                    lines.append(f"    witness: {w}")
        lines.append(f"{'OK' if self.passed else 'FAILED'} in {self.wall_time:.2f}s")
        return "\n".join(lines)


def strip_timing(report: dict) -> dict:
    out = dict(report)
    out.pop("wall_time", None)
    return out
