"""
Mobius Transformations

z -> (a z + b) / (c z + d), stored normalized so that ad - bc = 1.
"""

import cmath
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from app.config import config
from app.ds.series import ComplexLike
from app.exceptions import DegenerateMapError, DomainError


class MobiusMap(BaseModel):
    a: complex
    b: complex
    c: complex
    d: complex

    class Config:
        frozen = True

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data):
        if not isinstance(data, dict):
            return data
        a, b, c, d = (complex(data[key]) for key in ("a", "b", "c", "d"))
        det = a * d - b * c
        if abs(det) < config.tolerances.degenerate_map:
            raise DegenerateMapError(f"Mobius determinant |ad - bc| = {abs(det):.3g} is degenerate")
        root = cmath.sqrt(det)
        return {"a": a / root, "b": b / root, "c": c / root, "d": d / root}

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    def jet(self, z: ComplexLike, order: int = 3) -> Tuple:
        """f, f', f'', f''' with f' = det/(cz+d)^2 and det = 1 after normalization."""
        z = np.asarray(z, dtype=np.complex128) if np.ndim(z) else complex(z)
        denominator = self.c * z + self.d
        if np.any(np.abs(denominator) < config.tolerances.vanishing_denominator):
            raise DomainError(f"Mobius map has a pole at z = {-self.d / self.c}")
        det = self.determinant
        values = (
            (self.a * z + self.b) / denominator,
            det / denominator**2,
            -2.0 * self.c * det / denominator**3,
            6.0 * self.c**2 * det / denominator**4,
        )
        return values[: order + 1]


def mobius(a: complex, b: complex, c: complex, d: complex) -> MobiusMap:
    return MobiusMap(a=a, b=b, c=c, d=d)


def mobius_apply(phi: MobiusMap, z: ComplexLike) -> ComplexLike:
    return phi.jet(z, 0)[0]


def mobius_derivative(phi: MobiusMap, z: ComplexLike) -> ComplexLike:
    return phi.jet(z, 1)[1]


def mobius_inverse(phi: MobiusMap) -> MobiusMap:
    return MobiusMap(a=phi.d, b=-phi.b, c=-phi.c, d=phi.a)


def mobius_compose(outer: MobiusMap, inner: MobiusMap) -> MobiusMap:
    """outer o inner, the matrix product."""
    product = outer.matrix() @ inner.matrix()
    return MobiusMap(a=product[0, 0], b=product[0, 1], c=product[1, 0], d=product[1, 1])


def disk_automorphism(p: float) -> MobiusMap:
    """phi(z) = (z + p) / (1 + p z), mapping the unit disk onto itself with phi(0) = p."""
    if not (-1.0 < p < 1.0):
        raise DomainError(f"disk automorphism needs |p| < 1, got {p}")
    return MobiusMap(a=1.0, b=p, c=p, d=1.0)


def identity_map() -> MobiusMap:
    return MobiusMap(a=1.0, b=0.0, c=0.0, d=1.0)


def is_identity(phi: MobiusMap, tol: Optional[float] = None) -> bool:
    """True when the normalized matrix is +I or -I within tol."""
    tol = 1e-14 if tol is None else tol
    m = phi.matrix()
    eye = np.eye(2)
    return bool(np.max(np.abs(m - eye)) <= tol or np.max(np.abs(m + eye)) <= tol)
