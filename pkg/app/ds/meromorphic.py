"""
Meromorphic Functions with a Pole of Order m

f(z) = sum_{j=1}^{m} a_{-j} / (z - p)^j + sum_{n>=0} a_n z^n on the unit
disk, with the pole on the real segment [0, 1). Provides exact rational
evaluation of the principal part, its Laurent re-expansion about the
origin on the annulus p < |z| < 1, and the exterior form
R~(zeta) = R(1/zeta) as a Taylor series.
"""

import hashlib
import json
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, field_validator, model_validator

from app.config import config
from app.ds.series import (
    ComplexLike,
    TailBound,
    TruncatedSeries,
    as_coefficients,
    binomial_expand,
    cauchy_product,
    check_radius,
    differentiate,
    evaluate,
    geometric_tail_estimate,
    jet,
    monomial,
    scale,
    series_add,
    zero_series,
)
from app.exceptions import DomainError, PoleProximityError
from app.logger import logger


class PrincipalPart(BaseModel):
    """
    sum_{j=1}^{m} a_{-j} / (z - p)^j.

    `coefficients[j-1]` holds a_{-j}, so the list starts with a_{-1}.
    The order m is the length of the list and a_{-m} must be non-zero.
    """

    pole_location: float
    coefficients: np.ndarray

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @field_validator("coefficients", mode="before")
    @classmethod
    def _coerce_coefficients(cls, value):
        return as_coefficients(value)

    @model_validator(mode="after")
    def _check_invariants(self) -> "PrincipalPart":
        if not (0.0 <= self.pole_location < 1.0):
            raise DomainError(f"pole location must lie in [0, 1), got {self.pole_location}")
        if self.coefficients[-1] == 0:
            raise DomainError(
                f"top coefficient a_-{self.coefficients.size} must be non-zero "
                "(pole of exact order m)"
            )
        return self

    @property
    def order(self) -> int:
        return self.coefficients.size

    @property
    def top_coefficient(self) -> complex:
        """a_{-m}, the coefficient of (z - p)^(-m)."""
        return complex(self.coefficients[-1])

    @property
    def p(self) -> float:
        return self.pole_location


class PolarizedMeromorphic(BaseModel):
    """Principal part at p plus a truncated Taylor tail a_0..a_N."""

    principal: PrincipalPart
    taylor: TruncatedSeries

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @property
    def p(self) -> float:
        return self.principal.pole_location

    @property
    def m(self) -> int:
        return self.principal.order

    def __repr__(self) -> str:
        return (
            f"PolarizedMeromorphic(p={self.p}, m={self.m}, "
            f"principal={self.principal.coefficients.tolist()}, taylor={self.taylor!r})"
        )


class LaurentTail(BaseModel):
    """c_{-1}..c_{-K} of the principal part re-expanded about 0 on p < |z| < 1."""

    coefficients: np.ndarray
    annulus_inner: float
    annulus_outer: float = 1.0
    tail_estimate: float = 0.0

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @field_validator("coefficients", mode="before")
    @classmethod
    def _coerce_coefficients(cls, value):
        return as_coefficients(value)

    @property
    def order(self) -> int:
        return self.coefficients.size

    def evaluate(self, z: ComplexLike) -> ComplexLike:
        """Partial sum sum_k c_{-k} z^(-k), valid for p < |z|."""
        scalar = np.ndim(z) == 0
        w = 1.0 / np.asarray(z, dtype=np.complex128)
        acc = np.zeros_like(w)
        for c in self.coefficients[::-1]:
            acc = (acc + c) * w
        return complex(acc) if scalar else acc


def make_meromorphic(
    p: float,
    principal,
    taylor=(0.0,),
    declared_radius: float = 1.0,
) -> PolarizedMeromorphic:
    taylor_series = (
        taylor
        if isinstance(taylor, TruncatedSeries)
        else TruncatedSeries(coefficients=taylor, declared_radius=declared_radius)
    )
    return PolarizedMeromorphic(
        principal=PrincipalPart(pole_location=p, coefficients=principal),
        taylor=taylor_series,
    )


def _check_pole(principal: PrincipalPart, z: np.ndarray, guard: Optional[float]) -> None:
    guard = config.tolerances.pole_guard if guard is None else guard
    distance = np.min(np.abs(z - principal.pole_location)) if z.size else np.inf
    if distance <= guard:
        raise PoleProximityError(
            f"|z - p| = {distance:.3g} is within the pole guard {guard:g} of p={principal.pole_location}"
        )


def principal_jet(
    principal: PrincipalPart, z: ComplexLike, order: int = 0, guard: Optional[float] = None
) -> Tuple:
    """
    R(z) and its first `order` derivatives, exact rational arithmetic.

    d^n/dz^n (z-p)^(-j) = (-1)^n j(j+1)...(j+n-1) (z-p)^(-j-n)
    """
    scalar = np.ndim(z) == 0
    z_arr = np.asarray(z, dtype=np.complex128)
    _check_pole(principal, np.atleast_1d(z_arr), guard)
    w = 1.0 / (z_arr - principal.pole_location)

    results = []
    for n in range(order + 1):
        acc = np.zeros_like(w)
        # Horner in w over j = m..1 of a_{-j} * rising(j, n) * w^j, then times w^n
        for j in range(principal.order, 0, -1):
            rising = 1.0
            for i in range(n):
                rising *= j + i
            acc = (acc + principal.coefficients[j - 1] * rising) * w
        value = acc * w**n * (-1) ** n
        results.append(complex(value) if scalar else value)
    return tuple(results)


def principal_value(principal: PrincipalPart, z: ComplexLike, guard: Optional[float] = None):
    """R(z) at any z away from p; no radius restriction."""
    return principal_jet(principal, z, 0, guard)[0]


def evaluate_f(f: PolarizedMeromorphic, z: ComplexLike) -> ComplexLike:
    check_radius(f.taylor, z)
    return principal_value(f.principal, z) + evaluate(f.taylor, z)


def derivative_f(f: PolarizedMeromorphic, z: ComplexLike) -> ComplexLike:
    check_radius(f.taylor, z)
    principal = principal_jet(f.principal, z, 1)[1]
    if f.taylor.truncation_order < 1:
        return principal
    return principal + evaluate(differentiate(f.taylor), z)


def jet_f(f: PolarizedMeromorphic, z: ComplexLike, order: int = 3) -> Tuple:
    """(f, f', ..., f^(order)) at z."""
    check_radius(f.taylor, z)
    principal = principal_jet(f.principal, z, order)
    taylor = jet(f.taylor, z, order)
    return tuple(a + b for a, b in zip(principal, taylor))


def default_laurent_order(principal: PrincipalPart, r: float = 1.0) -> int:
    """
    Smallest K >= m whose estimated tail of |c_{-k}| r^(-k) drops below
    the configured relative threshold; capped at the configured maximum.
    """
    p = principal.pole_location
    if r <= p:
        raise DomainError(f"radius {r} must exceed the pole location {p}")
    cap = config.series.laurent_cap
    threshold = config.tolerances.laurent_tail
    c = _recentre_coefficients(principal, cap)
    k = np.arange(1, cap + 1, dtype=np.float64)
    with np.errstate(divide="ignore"):
        terms = np.exp(np.log(np.abs(c)) - k * np.log(r))
    partial = np.cumsum(terms)
    for K in range(principal.order, cap + 1):
        if geometric_tail_estimate(terms[:K]) < threshold * max(partial[K - 1], 1e-300):
            return K
    logger.warning(f"Laurent order capped at {cap} for p={p}, r={r}")
    return cap


def _recentre_coefficients(principal: PrincipalPart, K: int) -> np.ndarray:
    """c_{-k} = sum_{j<=min(m,k)} a_{-j} binom(k-1, j-1) p^(k-j), k = 1..K."""
    p = principal.pole_location
    c = np.zeros(K, dtype=np.complex128)
    for j in range(1, min(principal.order, K) + 1):
        # binomial_expand(j)[l] = binom(j+l-1, l) p^l with l = k - j
        expansion = binomial_expand(j, p, K - j).coefficients
        c[j - 1:] += principal.coefficients[j - 1] * expansion
    return c


def laurent_recentre(f: PolarizedMeromorphic, K: Optional[int] = None) -> LaurentTail:
    if K is None:
        K = default_laurent_order(f.principal)
    if K < 1:
        raise DomainError(f"Laurent order must be at least 1, got {K}")
    c = _recentre_coefficients(f.principal, K)
    # centred at 0 the expansion terminates at k = m
    tail = 0.0 if f.p == 0.0 and K >= f.m else geometric_tail_estimate(np.abs(c))
    logger.debug(f"Laurent recentre p={f.p} m={f.m} K={K} tail~{tail:.3g}")
    return LaurentTail(coefficients=c, annulus_inner=f.p, tail_estimate=tail)


def laurent_quadrature_oracle(
    f: PolarizedMeromorphic, radius: float, K: int, samples: int = 4096
) -> np.ndarray:
    """
    c_{-k} ~ (1/M) sum_t f(rho e^{i t}) (rho e^{i t})^k over M equispaced t.

    The Taylor part integrates to zero against z^k, k >= 1.
    """
    if not (f.p < radius <= f.taylor.declared_radius):
        raise DomainError(f"contour radius {radius} must lie in ({f.p}, {f.taylor.declared_radius}]")
    theta = 2.0 * np.pi * np.arange(samples) / samples
    z = radius * np.exp(1j * theta)
    values = evaluate_f(f, z)
    k = np.arange(1, K + 1)
    return (values[None, :] * z[None, :] ** k[:, None]).mean(axis=1)


def default_exterior_order(principal: PrincipalPart) -> int:
    """Truncation order keeping the tail of (1 - p zeta)^(-m) below 1e-16 on |zeta| = 1."""
    N = config.series.default_truncation
    p = principal.pole_location
    cap = config.series.laurent_cap
    if p == 0.0:
        return max(N, principal.order)
    while N < cap:
        expansion = binomial_expand(principal.order, p, N)
        if expansion.tail is not None and expansion.tail.bound_value(1.0) < 1e-16:
            break
        N = min(2 * N, cap)
    return N


def exterior_form(f: PolarizedMeromorphic, N: Optional[int] = None) -> TruncatedSeries:
    """R~(zeta) = sum_j a_{-j} zeta^j / (1 - p zeta)^j as a Taylor series on |zeta| <= 1."""
    if N is None:
        N = default_exterior_order(f.principal)
    N = max(N, f.m)
    total = zero_series(N)
    for j in range(1, f.m + 1):
        term = cauchy_product(monomial(j, N), binomial_expand(j, f.p, N))
        total = series_add(total, scale(term, f.principal.coefficients[j - 1]))
    return total


def extremal_area_function(
    principal: PrincipalPart, a0: complex, a1: complex, N: Optional[int] = None
) -> PolarizedMeromorphic:
    """R(z) + a0 + a1 z / (1 - p z): Taylor part a0, a1 p^(n-1)."""
    N = config.series.default_truncation if N is None else N
    p = principal.pole_location
    coefficients = np.zeros(N + 1, dtype=np.complex128)
    coefficients[0] = a0
    coefficients[1:] = a1 * p ** np.arange(N, dtype=np.float64)
    tail = TailBound(geometric_ratio=p, leading_bound=abs(a1) * p**N, order=N)
    taylor = TruncatedSeries(coefficients=coefficients, tail=tail)
    return PolarizedMeromorphic(principal=principal, taylor=taylor)


def _pairs(values: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in values]


def to_spec(f: PolarizedMeromorphic) -> dict:
    """The function-spec JSON document for f (principal listed a_-1 first)."""
    return {
        "pole": {"p": f.p, "m": f.m, "principal": _pairs(f.principal.coefficients)},
        "taylor": _pairs(f.taylor.coefficients),
        "radius": f.taylor.declared_radius,
    }


def from_spec(document: dict) -> PolarizedMeromorphic:
    pole = document["pole"]
    principal = [complex(re, im) for re, im in pole["principal"]]
    if int(pole["m"]) != len(principal):
        raise DomainError(
            f"pole order m={pole['m']} does not match {len(principal)} principal coefficients"
        )
    taylor = [complex(re, im) for re, im in document.get("taylor", [[0.0, 0.0]])]
    return make_meromorphic(
        float(pole["p"]), principal, taylor, float(document.get("radius", 1.0))
    )


def function_digest(f: PolarizedMeromorphic) -> str:
    """sha256 of the canonical (sorted, compact) function-spec JSON."""
    canonical = json.dumps(to_spec(f), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
