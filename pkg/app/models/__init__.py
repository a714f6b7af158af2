"""Input document schemas and the run manifest."""

from app.models.manifest import RunManifest, parse_tolerance_overrides
from app.models.spec_files import (
    FamilySpec,
    FunctionSpecFile,
    HadamardSpecFile,
    HarmonicSpecFile,
    LoadedInput,
    RunParams,
    load_input,
    parse_document,
)

__all__ = [
    "FamilySpec",
    "FunctionSpecFile",
    "HadamardSpecFile",
    "HarmonicSpecFile",
    "LoadedInput",
    "RunManifest",
    "RunParams",
    "load_input",
    "parse_document",
    "parse_tolerance_overrides",
]
