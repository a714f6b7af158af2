"""Input documents: function specs, family shorthands, harmonic and Hadamard specs."""

import hashlib
import json
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from app.ds.domains import ConvexDomain, DomainKind
from app.ds.meromorphic import (
    PolarizedMeromorphic,
    PrincipalPart,
    extremal_area_function,
    function_digest,
    make_meromorphic,
)
from app.ds.series import TruncatedSeries
from app.exceptions import QcxError, SpecParseError
from app.lab.harmonic import HarmonicMapSpec
from app.schema import Command, ExteriorRule

ComplexPair = Tuple[float, float]

FAMILY_NAMES = ("extremal_area", "extremal_extension", "schwarzian_f0", "schwarzian_fp")
DEFAULT_CRITERIA = ["area", "first_coefficient"]
CRITERIA = ("area", "first_coefficient", "sufficient", "area_coefficient", "omega_derivative")


def _complex(pair: ComplexPair) -> complex:
    return complex(pair[0], pair[1])


def _complex_list(pairs: List[ComplexPair]) -> List[complex]:
    return [_complex(pair) for pair in pairs]


class RunParams(BaseModel):
    """Optional per-document analysis parameters."""

    k: Optional[float] = Field(None, ge=0.0, lt=1.0, description="Dilatation bound")
    r: float = Field(1.0, gt=0.0, le=1.0, description="Area radius")
    criteria: List[str] = Field(default_factory=lambda: list(DEFAULT_CRITERIA))
    rule: Optional[ExteriorRule] = Field(None, description="Exterior rule for extend")
    omega: Optional[List[ComplexPair]] = Field(None, description="Explicit omega for ReflectOmega")
    dilation: Optional[float] = Field(None, gt=0.0, le=1.0, description="omega_r(z) = omega(rz)")
    p: Optional[float] = Field(None, ge=0.0, lt=1.0, description="Pole used by the Schwarzian bound")
    k1: Optional[float] = Field(None, ge=0.0, lt=1.0)
    k2: Optional[float] = Field(None, ge=0.0, lt=1.0)
    pairs: Optional[int] = Field(None, ge=10_000, description="Random pairs for sampled diagnostics")

    class Config:
        extra = "forbid"

    @field_validator("criteria")
    @classmethod
    def _known_criteria(cls, value: List[str]) -> List[str]:
        unknown = sorted(set(value) - set(CRITERIA))
        if unknown:
            raise ValueError(f"unknown criteria {unknown}; choose from {list(CRITERIA)}")
        return value


class PoleSpec(BaseModel):
    p: float = Field(..., ge=0.0, lt=1.0)
    m: int = Field(..., ge=1)
    principal: List[ComplexPair] = Field(..., description="a_-1 first")

    @model_validator(mode="after")
    def _order_matches(self) -> "PoleSpec":
        if len(self.principal) != self.m:
            raise ValueError(f"m={self.m} but {len(self.principal)} principal coefficients given")
        return self


class FunctionSpecFile(BaseModel):
    pole: PoleSpec
    taylor: List[ComplexPair] = Field(default_factory=lambda: [(0.0, 0.0)])
    radius: float = Field(1.0, gt=0.0, le=1.0)
    params: RunParams = Field(default_factory=RunParams)

    def materialize(self) -> PolarizedMeromorphic:
        return make_meromorphic(
            self.pole.p, _complex_list(self.pole.principal), _complex_list(self.taylor), self.radius
        )


class FamilySpec(BaseModel):
    """Shorthand for the built-in extremal families."""

    name: Literal["extremal_area", "extremal_extension", "schwarzian_f0", "schwarzian_fp"]
    k: float = Field(..., ge=0.0, lt=1.0)
    p: float = Field(0.0, ge=0.0, lt=1.0)
    principal: List[ComplexPair] = Field(default_factory=lambda: [(1.0, 0.0)])
    a0: ComplexPair = (0.0, 0.0)
    a1: Optional[ComplexPair] = Field(None, description="Defaults to (k, 0)")
    N: Optional[int] = Field(None, ge=1)

    @property
    def a1_value(self) -> complex:
        return complex(self.k) if self.a1 is None else _complex(self.a1)

    def principal_part(self) -> PrincipalPart:
        return PrincipalPart(pole_location=self.p, coefficients=_complex_list(self.principal))


class FamilyFile(BaseModel):
    family: FamilySpec
    params: RunParams = Field(default_factory=RunParams)


class DomainSpec(BaseModel):
    kind: DomainKind
    center: ComplexPair = (0.0, 0.0)
    radius: float = Field(1.0, gt=0.0)
    vertices: Optional[List[ComplexPair]] = None

    def materialize(self) -> ConvexDomain:
        vertices = None if self.vertices is None else _complex_list(self.vertices)
        return ConvexDomain(
            kind=self.kind, center=_complex(self.center), radius=self.radius, vertices=vertices
        )


class HarmonicSpecFile(BaseModel):
    h: List[ComplexPair]
    g: List[ComplexPair]
    domain: DomainSpec
    eta: Optional[List[ComplexPair]] = Field(None, description="Comparison map; defaults to h")
    radius: Optional[float] = Field(None, gt=0.0, le=1.0, description="Declared radius of h, g and eta")
    params: RunParams = Field(default_factory=RunParams)


class HadamardSpecFile(BaseModel):
    left: FunctionSpecFile
    right: FunctionSpecFile
    params: RunParams = Field(default_factory=RunParams)


ACCEPTED = {
    Command.AREA: ("function", "family"),
    Command.CERTIFY: ("function", "family"),
    Command.EXTEND: ("function", "family"),
    Command.SCHWARZIAN: ("function", "family"),
    Command.HADAMARD: ("hadamard",),
    Command.HARMONIC: ("harmonic",),
}


class LoadedInput(BaseModel):
    """A parsed input document with its value objects built."""

    path: str
    kind: Literal["function", "family", "harmonic", "hadamard"]
    params: RunParams
    document: dict
    function: Optional[PolarizedMeromorphic] = None
    family: Optional[FamilySpec] = None
    hadamard: Optional[Tuple[PolarizedMeromorphic, PolarizedMeromorphic]] = None
    harmonic: Optional[HarmonicMapSpec] = None
    eta: Optional[TruncatedSeries] = None

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @property
    def digest(self) -> str:
        if self.function is not None:
            return function_digest(self.function)
        canonical = json.dumps(self.document, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _kind_of(document: dict) -> str:
    if "family" in document:
        return "family"
    if "left" in document or "right" in document:
        return "hadamard"
    if "h" in document or "g" in document:
        return "harmonic"
    return "function"


_MODELS = {
    "function": FunctionSpecFile,
    "family": FamilyFile,
    "harmonic": HarmonicSpecFile,
    "hadamard": HadamardSpecFile,
}


def _first_error_field(error: ValidationError) -> Tuple[str, str]:
    first = error.errors()[0]
    field = ".".join(str(part) for part in first["loc"]) or "<document>"
    return field, first["msg"]


def _build(path: str, kind: str, parsed, document: dict) -> LoadedInput:
    common = dict(path=path, kind=kind, params=parsed.params, document=document)
    if kind == "function":
        return LoadedInput(function=parsed.materialize(), **common)
    if kind == "family":
        family = parsed.family
        function = None
        if family.name in ("extremal_area", "extremal_extension"):
            function = extremal_area_function(
                family.principal_part(), _complex(family.a0), family.a1_value, family.N
            )
        return LoadedInput(function=function, family=family, **common)
    if kind == "hadamard":
        return LoadedInput(hadamard=(parsed.left.materialize(), parsed.right.materialize()), **common)

    domain = parsed.domain.materialize()
    radius = 1.0 if parsed.radius is None else parsed.radius
    series = lambda pairs: TruncatedSeries(coefficients=_complex_list(pairs), declared_radius=radius)  # noqa: E731
    h = series(parsed.h)
    eta = h if parsed.eta is None else series(parsed.eta)
    harmonic = HarmonicMapSpec(h=h, g=series(parsed.g), domain=domain)
    return LoadedInput(harmonic=harmonic, eta=eta, **common)


def parse_document(document: dict, path: str = "<memory>") -> LoadedInput:
    """Validate a decoded document; SpecParseError names the offending field."""
    if not isinstance(document, dict):
        raise SpecParseError(path, "<document>", "top level must be a JSON object")
    kind = _kind_of(document)
    try:
        parsed = _MODELS[kind].model_validate(document)
    except ValidationError as e:
        field, detail = _first_error_field(e)
        raise SpecParseError(path, field, detail) from e
    try:
        return _build(path, kind, parsed, document)
    except QcxError as e:
        raise SpecParseError(path, kind, e.message) from e


def load_input(path: Union[str, Path], command: Optional[Command] = None) -> LoadedInput:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            document = json.load(f)
    except OSError as e:
        raise SpecParseError(str(path), "<file>", str(e)) from e
    except json.JSONDecodeError as e:
        raise SpecParseError(str(path), "<document>", f"invalid JSON at line {e.lineno}: {e.msg}") from e

    loaded = parse_document(document, str(path))
    if command is not None and command in ACCEPTED and loaded.kind not in ACCEPTED[command]:
        raise SpecParseError(
            str(path), "<document>", f"a {loaded.kind} spec is not accepted by '{command.value}'"
        )
    return loaded
