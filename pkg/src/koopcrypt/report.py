"""JSON envelope shared by every CLI command.

Keys are sorted and ``timing_ms`` is the only field allowed to differ
between two runs on the same inputs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from enum import Enum

SCHEMA_VERSION = "1"


def _plain(obj):
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


@dataclass
class ExperimentReport:
    command: str
    inputs: dict
    outputs: dict
    timing_ms: float = 0.0
    artifact_version: str = field(default="")

    def __post_init__(self):
        if not self.artifact_version:
            from . import __version__

            self.artifact_version = f"{__version__}+schema{SCHEMA_VERSION}"
        if self.timing_ms < 0:
            raise ValueError("timing_ms must be nonnegative")

    def to_dict(self, *, timing: bool = True) -> dict:
        out = {
            "command": self.command,
            "inputs": _plain(self.inputs),
            "outputs": _plain(self.outputs),
            "artifact_version": self.artifact_version,
        }
        if timing:
            out["timing_ms"] = round(self.timing_ms, 3)
        return out

    def to_json(self, *, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing=timing), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        data = json.loads(text)
        return cls(data["command"], data["inputs"], data["outputs"],
                   data.get("timing_ms", 0.0), data["artifact_version"])
