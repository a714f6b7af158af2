"""Run manifest: one CLI invocation, its inputs and its resolved tolerances."""

import os
from pathlib import Path
from typing import Dict, List

from pydantic import BaseModel, Field, ValidationError, field_validator

from app.config import ToleranceSettings, config
from app.exceptions import ReportIOError, SpecParseError
from app.schema import Command


def parse_tolerance_overrides(pairs: List[str]) -> Dict[str, float]:
    """`key=val` strings to a dict, checked against ToleranceSettings."""
    overrides: Dict[str, float] = {}
    known = ToleranceSettings.model_fields
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        key = key.strip()
        if not sep or key not in known:
            raise SpecParseError("--tol", key or pair, f"expected one of {sorted(known)} as key=val")
        try:
            overrides[key] = float(value)
        except ValueError as e:
            raise SpecParseError("--tol", key, f"not a number: {value!r}") from e
    return overrides


class RunManifest(BaseModel):
    command: Command
    input_paths: List[Path] = Field(default_factory=list)
    output_dir: Path
    seed: int = Field(default_factory=lambda: config.run.seed)
    tolerance_overrides: Dict[str, float] = Field(default_factory=dict)
    workers: int = Field(default_factory=lambda: config.run.workers, ge=1)

    class Config:
        frozen = True

    @field_validator("tolerance_overrides")
    @classmethod
    def _known_keys(cls, value: Dict[str, float]) -> Dict[str, float]:
        unknown = sorted(set(value) - set(ToleranceSettings.model_fields))
        if unknown:
            raise ValueError(f"unknown tolerance keys {unknown}")
        return value

    def tolerances(self) -> ToleranceSettings:
        """config.tolerances with this run's overrides applied."""
        merged = config.tolerances.model_dump()
        merged.update(self.tolerance_overrides)
        try:
            return ToleranceSettings(**merged)
        except ValidationError as e:
            raise SpecParseError("--tol", "tolerances", str(e)) from e

    def prepare_output(self) -> Path:
        """Create output_dir and confirm it is writable."""
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ReportIOError(self.output_dir, str(e)) from e
        if not os.access(self.output_dir, os.W_OK):
            raise ReportIOError(self.output_dir, "directory is not writable")
        return self.output_dir

    def to_record(self) -> dict:
        return {
            "command": self.command.value,
            "input_paths": [str(path) for path in self.input_paths],
            "output_dir": str(self.output_dir),
            "seed": self.seed,
            "tolerance_overrides": dict(sorted(self.tolerance_overrides.items())),
            "workers": self.workers,
        }
