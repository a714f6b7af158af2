"""
Truncated Complex Power Series

Finite coefficient sequences c_0..c_N with a declared trust radius and
optional geometric tail bound. Every other module samples functions
through these helpers, so evaluation is vectorized over numpy arrays.

Series are immutable: coefficient arrays are copied on construction and
marked read-only; operations return fresh values.
"""

import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.config import config
from app.exceptions import DomainError

ComplexLike = Union[complex, float, np.ndarray]


def as_coefficients(values) -> np.ndarray:
    """Copy values into a read-only complex128 vector, rejecting NaN/Inf."""
    arr = np.array(values, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("coefficients must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise DomainError("coefficients must be finite")
    arr.setflags(write=False)
    return arr


def _unwrap(result: np.ndarray, scalar: bool):
    return complex(result) if scalar else result


class TailBound(BaseModel):
    """
    Geometric bound on the dropped terms of a truncated series.

    bound_value(r) = leading_bound * r^(N+1) / (1 - geometric_ratio * r)
    """

    geometric_ratio: float = Field(..., ge=0.0, lt=1.0)
    leading_bound: float = Field(..., ge=0.0)
    order: int = Field(..., ge=0)

    class Config:
        frozen = True

    def bound_value(self, r: float) -> float:
        if r < 0:
            raise DomainError(f"tail bound requested at negative radius {r}")
        denominator = 1.0 - self.geometric_ratio * r
        if denominator <= 0:
            return math.inf
        return self.leading_bound * r ** (self.order + 1) / denominator


class TruncatedSeries(BaseModel):
    """Sum_{n=0}^{N} c_n z^n, trusted on |z| <= declared_radius."""

    coefficients: np.ndarray
    declared_radius: float = 1.0
    tail: Optional[TailBound] = None

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @field_validator("coefficients", mode="before")
    @classmethod
    def _coerce_coefficients(cls, value):
        return as_coefficients(value)

    @model_validator(mode="after")
    def _check_radius(self) -> "TruncatedSeries":
        if not (0.0 < self.declared_radius <= 1.0):
            raise DomainError(
                f"declared_radius must lie in (0, 1], got {self.declared_radius}"
            )
        return self

    @property
    def truncation_order(self) -> int:
        return self.coefficients.size - 1

    def __len__(self) -> int:
        return self.coefficients.size

    def __repr__(self) -> str:
        return (
            f"TruncatedSeries(N={self.truncation_order}, "
            f"radius={self.declared_radius}, head={self.coefficients[:3].tolist()})"
        )


def from_coefficients(values: Sequence, declared_radius: float = 1.0) -> TruncatedSeries:
    return TruncatedSeries(coefficients=values, declared_radius=declared_radius)


def zero_series(N: int = 0, declared_radius: float = 1.0) -> TruncatedSeries:
    return TruncatedSeries(coefficients=np.zeros(N + 1), declared_radius=declared_radius)


def monomial(j: int, N: int, coefficient: complex = 1.0) -> TruncatedSeries:
    """coefficient * z^j padded with zeros up to order N (N >= j)."""
    if j < 0 or N < j:
        raise DomainError(f"monomial z^{j} does not fit in truncation order {N}")
    coefficients = np.zeros(N + 1, dtype=np.complex128)
    coefficients[j] = coefficient
    return TruncatedSeries(coefficients=coefficients)


def check_radius(s: TruncatedSeries, z: ComplexLike, slack: Optional[float] = None) -> None:
    slack = config.tolerances.radius_slack if slack is None else slack
    limit = s.declared_radius * (1.0 + slack)
    modulus = np.max(np.abs(z)) if np.ndim(z) else abs(z)
    if modulus > limit:
        raise DomainError(
            f"|z| = {modulus:.17g} exceeds declared radius {s.declared_radius}"
        )


def evaluate(s: TruncatedSeries, z: ComplexLike) -> ComplexLike:
    """Horner evaluation, highest degree first. Accepts scalars or arrays."""
    scalar = np.ndim(z) == 0
    z_arr = np.asarray(z, dtype=np.complex128)
    check_radius(s, z_arr)
    acc = np.zeros_like(z_arr)
    for c in s.coefficients[::-1]:
        acc = acc * z_arr + c
    return _unwrap(acc, scalar)


def differentiate(s: TruncatedSeries) -> TruncatedSeries:
    if s.truncation_order < 1:
        raise DomainError("cannot differentiate a constant series")
    n = np.arange(1, s.coefficients.size)
    return TruncatedSeries(
        coefficients=n * s.coefficients[1:],
        declared_radius=s.declared_radius,
    )


def jet(s: TruncatedSeries, z: ComplexLike, order: int = 3) -> Tuple:
    """(s, s', ..., s^(order)) at z; short series contribute zero derivatives."""
    values = [evaluate(s, z)]
    current = s
    for _ in range(order):
        if current.truncation_order < 1:
            values.append(np.zeros_like(values[0]) if np.ndim(z) else 0j)
            current = zero_series(0, s.declared_radius)
            continue
        current = differentiate(current)
        values.append(evaluate(current, z))
    return tuple(values)


def cauchy_product(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """
    c_n = sum_{i+j=n} a_i b_j for n <= min(Na, Nb).

    Each coefficient is a correctly rounded sum (math.fsum on real and
    imaginary parts), so the product is exactly commutative.
    """
    order = min(a.truncation_order, b.truncation_order)
    head_a = a.coefficients[: order + 1]
    head_b = b.coefficients[: order + 1]
    # flipped outer product: anti-diagonals become diagonals
    products = np.fliplr(np.outer(head_a, head_b))
    coefficients = np.empty(order + 1, dtype=np.complex128)
    for n in range(order + 1):
        terms = products.diagonal(order - n)
        coefficients[n] = complex(math.fsum(terms.real), math.fsum(terms.imag))
    return TruncatedSeries(
        coefficients=coefficients,
        declared_radius=min(a.declared_radius, b.declared_radius),
    )


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    order = min(a.truncation_order, b.truncation_order)
    return TruncatedSeries(
        coefficients=a.coefficients[: order + 1] + b.coefficients[: order + 1],
        declared_radius=min(a.declared_radius, b.declared_radius),
    )


def scale(s: TruncatedSeries, c: complex) -> TruncatedSeries:
    tail = None
    if s.tail is not None:
        tail = s.tail.model_copy(update={"leading_bound": s.tail.leading_bound * abs(c)})
    return TruncatedSeries(
        coefficients=s.coefficients * c, declared_radius=s.declared_radius, tail=tail
    )


def dilate(s: TruncatedSeries, r: float) -> TruncatedSeries:
    """Coefficients of s(rz), 0 < r <= 1."""
    if not (0.0 < r <= 1.0):
        raise DomainError(f"dilation factor must lie in (0, 1], got {r}")
    powers = r ** np.arange(s.coefficients.size)
    return TruncatedSeries(coefficients=s.coefficients * powers, declared_radius=s.declared_radius)


def binomial_expand(j: int, p: float, N: Optional[int] = None) -> TruncatedSeries:
    """
    Coefficients of (1 - p x)^(-j) up to x^N: term l is binom(j+l-1, l) p^l.

    Binomials come from exact integers while j+l-1 stays within the exact
    range; past it the term follows t_l = t_{l-1} * p * (j+l-1) / l.
    """
    N = config.series.default_truncation if N is None else N
    if j < 1:
        raise DomainError(f"binomial exponent must be positive, got {j}")
    if not (0.0 <= p < 1.0):
        raise DomainError(f"p must lie in [0, 1), got {p}")
    if N < 0:
        raise DomainError(f"truncation order must be non-negative, got {N}")

    exact_limit = config.series.exact_binomial_limit
    terms = np.zeros(N + 1, dtype=np.float64)
    terms[0] = 1.0
    for l in range(1, N + 1):
        if j + l - 1 <= exact_limit:
            terms[l] = float(math.comb(j + l - 1, l)) * p**l
        else:
            terms[l] = terms[l - 1] * p * (j + l - 1) / l

    tail = None
    # consecutive-term ratio p(j+l)/(l+1) decreases towards p
    ratio = p * (j + N) / (N + 1)
    if ratio < 1.0:
        # t_{N+1} = t_N * ratio
        tail = TailBound(geometric_ratio=ratio, leading_bound=terms[N] * ratio, order=N)
    return TruncatedSeries(coefficients=terms, tail=tail)


def geometric_tail_estimate(terms: np.ndarray, window: int = 8) -> float:
    """
    Estimate the remainder of a non-negative series from its last terms.

    Uses the largest consecutive ratio over the trailing window; returns 0
    for sequences that terminate and inf when the ratio test fails.
    """
    terms = np.asarray(terms, dtype=np.float64)
    if terms.size == 0:
        return 0.0
    tail = terms[-(window + 1):]
    last = tail[-1]
    if not np.any(tail > 0):
        return 0.0
    if last == 0.0:
        # trailing zeros: finite sum, or a gap bigger than the window
        return 0.0 if tail[-2:].sum() == 0.0 else float(tail.max())
    previous = tail[:-1]
    if previous.size == 0:
        return math.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(previous > 0, tail[1:] / previous, np.inf)
    ratio = float(np.max(ratios))
    if ratio >= 1.0:
        return math.inf
    return float(last * ratio / (1.0 - ratio))
