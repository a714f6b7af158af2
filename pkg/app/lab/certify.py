"""
Membership and Inequality Certificates

Every check returns a Certificate whose margin is bound - value, snapped
to zero inside the configured equality tolerance, so that margin >= 0
holds exactly when the verdict is pass.
"""

import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel

from app.config import ToleranceSettings, config
from app.ds.meromorphic import (
    PolarizedMeromorphic,
    PrincipalPart,
    function_digest,
    laurent_recentre,
)
from app.ds.series import TruncatedSeries, geometric_tail_estimate
from app.exceptions import DomainError, MismatchError, NonConvergence
from app.lab.area import laurent_energy, taylor_energy
from app.logger import logger
from app.schema import Certificate, CriterionId, Verdict


def make_certificate(
    criterion: CriterionId,
    value: float,
    bound: float,
    *,
    strict: bool = False,
    digest: str = "",
    notes: str = "",
    advisory: bool = False,
    tol: Optional[ToleranceSettings] = None,
) -> Certificate:
    """
    Compare value against bound.

    Non-strict criteria pass on equality (margin 0). Strict criteria fail on
    equality and report the negative equality tolerance as margin.
    """
    tol = tol or config.tolerances
    margin = bound - value
    if abs(margin) <= tol.equality_snap:
        margin = -tol.equality_snap if strict else 0.0
    verdict = Verdict.PASS if margin >= 0 else Verdict.FAIL
    return Certificate(
        criterion_id=criterion,
        verdict=verdict,
        margin=margin,
        value=value,
        bound=bound,
        inputs_digest=digest,
        notes=notes,
        advisory=advisory,
    )


def _check_k(k: float) -> None:
    if not (0.0 <= k < 1.0):
        raise DomainError(f"k must lie in [0, 1), got {k}")


def boundary_energies(
    f: PolarizedMeromorphic, tol: Optional[ToleranceSettings] = None
) -> Tuple[float, float]:
    """T and P at r = 1; NonConvergence when P's tail is above threshold."""
    tol = tol or config.tolerances
    tail = laurent_recentre(f)
    P, p_tail = laurent_energy(tail, 1.0)
    if p_tail > tol.area_tail:
        raise NonConvergence(
            f"Laurent energy tail {p_tail:.3g} exceeds {tol.area_tail:g} (p={f.p}, K={tail.order})"
        )
    T, _ = taylor_energy(f, 1.0)
    return T, P


def check_area_inequality(
    f: PolarizedMeromorphic, k: float, tol: Optional[ToleranceSettings] = None
) -> Tuple[Certificate, Certificate]:
    """
    Area-theorem inequality in both forms.

    The as-printed form T <= (P - T) k^2 is advisory; the form the
    inequality chain actually yields is T <= k^2 P.
    """
    _check_k(k)
    T, P = boundary_energies(f, tol)
    digest = function_digest(f)
    energies = f"T={T!r} P={P!r}"
    as_printed = make_certificate(
        CriterionId.AREA_INEQUALITY_AS_PRINTED,
        T,
        (P - T) * k**2,
        digest=digest,
        notes=f"{energies}; printed bound is smaller than k^2 P by k^2 T",
        advisory=True,
        tol=tol,
    )
    derived = make_certificate(
        CriterionId.AREA_INEQUALITY_DERIVED,
        T,
        k**2 * P,
        digest=digest,
        notes=energies,
        tol=tol,
    )
    logger.debug(f"Area inequality k={k}: {energies} printed={as_printed.verdict.value} derived={derived.verdict.value}")
    return as_printed, derived


def first_taylor_coefficient(f: PolarizedMeromorphic) -> complex:
    a = f.taylor.coefficients
    return complex(a[1]) if a.size > 1 else 0j


def check_first_coefficient(
    f: PolarizedMeromorphic, k: float, tol: Optional[ToleranceSettings] = None
) -> Certificate:
    """|a_1| < k / (1 - p^2)^m, strict."""
    _check_k(k)
    bound = k / (1.0 - f.p**2) ** f.m
    return make_certificate(
        CriterionId.FIRST_COEFFICIENT_BOUND,
        abs(first_taylor_coefficient(f)),
        bound,
        strict=True,
        digest=function_digest(f),
        tol=tol,
    )


def check_sufficient_membership(
    f: PolarizedMeromorphic, k: float, tol: Optional[ToleranceSettings] = None
) -> Certificate:
    """sum n |a_n| <= |a_-m| k / (1 + p)^(m+1); a pass places f in the k-class."""
    _check_k(k)
    tol = tol or config.tolerances
    a = f.taylor.coefficients
    terms = np.arange(a.size) * np.abs(a)
    remainder = geometric_tail_estimate(terms[1:]) if f.taylor.tail is not None else 0.0
    if remainder > tol.membership_tail:
        raise NonConvergence(
            f"sum n|a_n| tail {remainder:.3g} exceeds {tol.membership_tail:g}"
        )
    total = math.fsum(terms[1:])
    bound = abs(f.principal.top_coefficient) * k / (1.0 + f.p) ** (f.m + 1)
    return make_certificate(
        CriterionId.SUFFICIENT_MEMBERSHIP,
        total,
        bound,
        digest=function_digest(f),
        notes=f"top pole coefficient a_-{f.m} used",
        tol=tol,
    )


def check_area_coefficient_bound(
    f: PolarizedMeromorphic, k: float, tol: Optional[ToleranceSettings] = None
) -> Certificate:
    """sum n |a_n|^2 <= |a_-m|^2 k^2 / (1 - p^2)^(2m)."""
    _check_k(k)
    T, _ = taylor_energy(f, 1.0)
    bound = abs(f.principal.top_coefficient) ** 2 * k**2 / (1.0 - f.p**2) ** (2 * f.m)
    return make_certificate(
        CriterionId.AREA_COEFFICIENT_BOUND, T, bound, digest=function_digest(f), tol=tol
    )


def check_omega_derivative_bound(
    f: PolarizedMeromorphic,
    omega: TruncatedSeries,
    k: float,
    tol: Optional[ToleranceSettings] = None,
) -> Certificate:
    """sup_{|z|<=1} |omega'| <= k / (1 + p)^(m+1), sup taken on the boundary."""
    from app.lab.extension import sup_omega_derivative

    _check_k(k)
    tol = tol or config.tolerances
    sup, refined = sup_omega_derivative(omega)
    bound = k / (1.0 + f.p) ** (f.m + 1)
    return make_certificate(
        CriterionId.OMEGA_DERIVATIVE_BOUND,
        sup,
        bound + tol.omega_bound,
        digest=function_digest(f),
        notes=f"boundary sup {sup!r}, Richardson estimate {refined!r}",
        tol=tol,
    )


class HadamardProductSpec(BaseModel):
    """(f * g)(z) = a_-m b_-m / (z - p)^m + sum a_n b_n z^n."""

    left: PolarizedMeromorphic
    right: PolarizedMeromorphic
    product: PolarizedMeromorphic
    alpha_m: Optional[float] = None

    class Config:
        arbitrary_types_allowed = True
        frozen = True


def _single_coefficient_form(f: PolarizedMeromorphic, side: str) -> None:
    if np.any(f.principal.coefficients[:-1] != 0):
        raise DomainError(
            f"{side} principal part must have the single-coefficient form a/(z-p)^m"
        )


def hadamard_product(left: PolarizedMeromorphic, right: PolarizedMeromorphic) -> HadamardProductSpec:
    if left.p != right.p or left.m != right.m:
        raise MismatchError(
            f"Hadamard product needs a shared pole: (p={left.p}, m={left.m}) vs (p={right.p}, m={right.m})"
        )
    _single_coefficient_form(left, "left")
    _single_coefficient_form(right, "right")
    principal = np.zeros(left.m, dtype=np.complex128)
    principal[-1] = left.principal.top_coefficient * right.principal.top_coefficient
    order = min(left.taylor.truncation_order, right.taylor.truncation_order)
    taylor = TruncatedSeries(
        coefficients=left.taylor.coefficients[: order + 1] * right.taylor.coefficients[: order + 1],
        declared_radius=min(left.taylor.declared_radius, right.taylor.declared_radius),
    )
    product = PolarizedMeromorphic(
        principal=PrincipalPart(pole_location=left.p, coefficients=principal),
        taylor=taylor,
    )
    return HadamardProductSpec(left=left, right=right, product=product)


def hadamard_alpha(spec: HadamardProductSpec, k1: float, k2: float) -> float:
    """alpha_m = |a_-m| |b_-m| k1 k2 / (1 - p)^(2m)."""
    p, m = spec.left.p, spec.left.m
    moduli = abs(spec.left.principal.top_coefficient) * abs(spec.right.principal.top_coefficient)
    return moduli * (k1 * k2) / (1.0 - p) ** (2 * m)


def cauchy_schwarz_chain(a: np.ndarray, b: np.ndarray) -> Tuple[float, float]:
    """(sum n|a_n b_n|, sqrt(sum n|a_n|^2) sqrt(sum n|b_n|^2)) on the shared range."""
    order = min(a.size, b.size)
    n = np.arange(order, dtype=np.float64)
    moduli_a, moduli_b = np.abs(a[:order]), np.abs(b[:order])
    mixed = math.fsum(n * (moduli_a * moduli_b))
    energy_a = math.fsum(n * moduli_a**2)
    energy_b = math.fsum(n * moduli_b**2)
    return mixed, math.sqrt(energy_a) * math.sqrt(energy_b)


def certify_hadamard(
    spec: HadamardProductSpec, k1: float, k2: float, tol: Optional[ToleranceSettings] = None
) -> Certificate:
    """Pass iff alpha_m < 1; the Cauchy-Schwarz chain slacks are recorded in notes."""
    _check_k(k1)
    _check_k(k2)
    alpha = hadamard_alpha(spec, k1, k2)
    certificate = make_certificate(
        CriterionId.HADAMARD_ALPHA,
        alpha,
        1.0,
        strict=True,
        digest=function_digest(spec.product),
        tol=tol,
    )
    if certificate.passed:
        mixed, product = cauchy_schwarz_chain(
            spec.left.taylor.coefficients, spec.right.taylor.coefficients
        )
        ceiling = alpha / (1.0 + spec.left.p) ** (2 * spec.left.m)
        notes = (
            f"cauchy_schwarz_slack={product - mixed!r} "
            f"area_bound_slack={ceiling - product!r}"
        )
        certificate = certificate.model_copy(update={"notes": notes})
    return certificate
