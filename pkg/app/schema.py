from enum import Enum
from pathlib import Path
from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from app.ds.series import TruncatedSeries


class Command(str, Enum):
    """CLI sub-commands"""

    AREA = "area"
    CERTIFY = "certify"
    EXTEND = "extend"
    SCHWARZIAN = "schwarzian"
    HADAMARD = "hadamard"
    HARMONIC = "harmonic"
    GALLERY = "gallery"


COMMAND_VALUES = tuple(command.value for command in Command)


class CriterionId(str, Enum):
    """Checks that emit certificates"""

    AREA_INEQUALITY_AS_PRINTED = "AreaInequalityAsPrinted"
    AREA_INEQUALITY_DERIVED = "AreaInequalityDerived"
    FIRST_COEFFICIENT_BOUND = "FirstCoefficientBound"
    SUFFICIENT_MEMBERSHIP = "SufficientMembership"
    OMEGA_DERIVATIVE_BOUND = "OmegaDerivativeBound"
    HADAMARD_ALPHA = "HadamardAlpha"
    AREA_COEFFICIENT_BOUND = "AreaCoefficientBound"
    SCHWARZIAN_NORM_BOUND = "SchwarzianNormBound"
    HARMONIC_EXTENSION_CONDITION = "HarmonicExtensionCondition"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class ExteriorRule(str, Enum):
    """How an extension continues past the unit circle"""

    REFLECT_OMEGA = "ReflectOmega"
    EXTREMAL_TAIL = "ExtremalTail"


def jsonable(value: Any) -> Any:
    """Convert complex numbers, numpy scalars/arrays and enums into JSON-safe values."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (complex, np.complexfloating)):
        return [jsonable(float(value.real)), jsonable(float(value.imag))]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.floating):
        return jsonable(float(value))
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, BaseModel):
        return jsonable(value.model_dump())
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    if isinstance(value, Path):
        return str(value)
    return value


class Certificate(BaseModel):
    """Verdict record emitted by every checker; margin >= 0 exactly when it passes."""

    criterion_id: CriterionId
    verdict: Verdict
    margin: float
    value: float
    bound: float
    inputs_digest: str = ""
    notes: str = ""
    advisory: bool = False

    class Config:
        frozen = True

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def to_record(self) -> dict:
        return jsonable(self.model_dump())


class GridSpec(BaseModel):
    radial_count: int
    angular_count: int
    radial_range: Tuple[float, float]

    class Config:
        frozen = True


class AreaReport(BaseModel):
    r: float
    taylor_energy: float = Field(..., ge=0.0)
    laurent_energy: float = Field(..., ge=0.0)
    complement_area: float = Field(..., ge=0.0)
    tail_estimate: float
    sign: int = Field(..., description="sign of P(r) - T(r)")
    laurent_order: int

    class Config:
        frozen = True

    def to_record(self) -> dict:
        return jsonable(self.model_dump())


class NonDegeneracyEstimate(BaseModel):
    C: float = Field(..., ge=0.0)
    argmin_zeta: complex
    zero_free_certified: bool
    winding_number: int
    samples: int

    class Config:
        frozen = True

    def to_record(self) -> dict:
        return jsonable(self.model_dump())


class DilatationField(BaseModel):
    """Sampled mu over a grid; arrays are shaped (angular_count, radial_count)."""

    points: np.ndarray
    mu: np.ndarray
    sup_abs_mu: float
    argmax_z: complex
    grid_spec: GridSpec

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    def to_record(self) -> dict:
        return jsonable(self.model_dump(exclude={"points", "mu"}))


class SchwarzianNormReport(BaseModel):
    norm_estimate: float
    argmax_z: complex
    grid_spec: GridSpec
    refinement_count: int
    convergence_flag: bool
    points: Optional[np.ndarray] = None
    weighted: Optional[np.ndarray] = None

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    def to_record(self) -> dict:
        return jsonable(self.model_dump(exclude={"points", "weighted"}))


class CoLipschitzEstimate(BaseModel):
    K_lower: float
    M_upper: float
    argmin_z: complex
    eta: TruncatedSeries

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    def to_record(self) -> dict:
        return jsonable(self.model_dump(exclude={"eta"}))


class InjectivityReport(BaseModel):
    """Sampled homeomorphism diagnostic; empty collision and fold lists mean nothing was found."""

    pairs: int
    seed: int
    sampled_points: int
    collision_count: int = 0
    fold_count: int = 0
    collisions: List[Tuple[complex, complex]] = Field(default_factory=list)
    folds: List[complex] = Field(default_factory=list)

    class Config:
        frozen = True

    @property
    def clean(self) -> bool:
        return self.collision_count == 0 and self.fold_count == 0

    def to_record(self) -> dict:
        record = jsonable(self.model_dump())
        record["clean"] = self.clean
        return record


class BilipschitzReport(BaseModel):
    pairs: int
    seed: int
    lower_constant: float
    upper_constant: float
    min_ratio: float
    max_ratio: float
    lower_violations: int
    upper_violations: int

    class Config:
        frozen = True

    @property
    def clean(self) -> bool:
        return self.lower_violations == 0 and self.upper_violations == 0

    def to_record(self) -> dict:
        record = jsonable(self.model_dump())
        record["clean"] = self.clean
        return record
