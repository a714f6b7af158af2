"""
Harmonic Extension Criterion

For a sense-preserving harmonic map f = h + conj(g) on a bounded convex
domain and an analytic comparison map eta with positive co-Lipschitz
constant K, the condition |h' - eta'| + |g'| <= k K on the domain makes f
k-quasiconformal there, with bi-Lipschitz bounds

    (1 - k) K |dz| <= |f(z2) - f(z1)| <= (M + k K) |dz|,  M = sup |eta'|.

Everything here is sampled: lattice interior points, boundary points and
a refined window around the boundary extremum.
"""

from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from app.config import ToleranceSettings, config
from app.ds.domains import ConvexDomain, sample_domain
from app.ds.series import TruncatedSeries, differentiate, evaluate
from app.exceptions import DegenerateEta, DomainError, VanishingDenominator
from app.lab.certify import make_certificate
from app.logger import logger
from app.schema import BilipschitzReport, Certificate, CoLipschitzEstimate, CriterionId


def _derivative(s: TruncatedSeries, z: np.ndarray) -> np.ndarray:
    if s.truncation_order < 1:
        return np.zeros_like(np.asarray(z, dtype=np.complex128))
    return evaluate(differentiate(s), z)


class HarmonicMapSpec(BaseModel):
    """f = h + conj(g) on `domain`; both series must be trusted on the closed domain."""

    h: TruncatedSeries
    g: TruncatedSeries
    domain: ConvexDomain

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @model_validator(mode="after")
    def _check_map(self) -> "HarmonicMapSpec":
        reach = self.domain.bounding_radius()
        trusted = min(self.h.declared_radius, self.g.declared_radius)
        if reach > trusted * (1.0 + config.tolerances.radius_slack):
            raise DomainError(f"domain reaches |z| = {reach}, series are trusted to {trusted}")
        z = sample_domain(self.domain, config.harmonic.grid, config.harmonic.boundary_samples)
        if np.any(np.abs(_derivative(self.g, z)) >= np.abs(_derivative(self.h, z))):
            raise DomainError("harmonic map is not sense-preserving (|g'| >= |h'| at a sample)")
        return self


def evaluate_harmonic(spec: HarmonicMapSpec, z):
    return evaluate(spec.h, z) + np.conj(evaluate(spec.g, z))


def _samples(domain: ConvexDomain, grid: Optional[int]) -> np.ndarray:
    grid = config.harmonic.grid if grid is None else grid
    if grid < 64:
        raise DomainError(f"need at least a 64x64 interior grid, got {grid}")
    return sample_domain(domain, grid, config.harmonic.boundary_samples)


def _refine_boundary(domain: ConvexDomain, values_at, pick) -> np.ndarray:
    """Values on a fine boundary window around the boundary sample chosen by `pick`."""
    samples = config.harmonic.boundary_samples
    coarse_t = np.arange(samples) / samples
    coarse = values_at(domain.boundary_at(coarse_t))
    centre = coarse_t[int(pick(coarse))]
    window = centre + np.linspace(-1.0, 1.0, config.harmonic.refine_samples) / samples
    return domain.boundary_at(window)


def co_lipschitz_estimate(
    eta: TruncatedSeries,
    domain: ConvexDomain,
    grid: Optional[int] = None,
    tol: Optional[ToleranceSettings] = None,
) -> CoLipschitzEstimate:
    """
    K_lower = min |eta'| and M_upper = max |eta'| over the samples.

    On a convex domain the segment integral of eta' bounds the difference
    quotients from below by min |eta'|, which is what is reported.
    """
    tol = tol or config.tolerances
    speed = lambda z: np.abs(_derivative(eta, z))  # noqa: E731
    z = np.concatenate(
        [
            _samples(domain, grid),
            _refine_boundary(domain, speed, np.argmin),
            _refine_boundary(domain, speed, np.argmax),
        ]
    )
    values = speed(z)
    index = int(np.argmin(values))
    K_lower = float(values[index])
    if K_lower < tol.degenerate_eta:
        raise DegenerateEta(f"|eta'| = {K_lower:.3g} at z={z[index]}")
    return CoLipschitzEstimate(
        K_lower=K_lower, M_upper=float(np.max(values)), argmin_z=complex(z[index]), eta=eta
    )


def condition_lhs(spec: HarmonicMapSpec, eta: TruncatedSeries, z: np.ndarray) -> np.ndarray:
    """|h' - eta'| + |g'|."""
    return np.abs(_derivative(spec.h, z) - _derivative(eta, z)) + np.abs(_derivative(spec.g, z))


def check_extension_condition(
    spec: HarmonicMapSpec,
    eta: TruncatedSeries,
    k: float,
    grid: Optional[int] = None,
    tol: Optional[ToleranceSettings] = None,
    estimate: Optional[CoLipschitzEstimate] = None,
) -> Certificate:
    """max over samples of |h' - eta'| + |g'| <= k K_lower."""
    if not (0.0 <= k < 1.0):
        raise DomainError(f"k must lie in [0, 1), got {k}")
    estimate = estimate or co_lipschitz_estimate(eta, spec.domain, grid, tol)
    lhs = lambda z: condition_lhs(spec, eta, z)  # noqa: E731
    z = np.concatenate(
        [_samples(spec.domain, grid), _refine_boundary(spec.domain, lhs, np.argmax)]
    )
    values = lhs(z)
    index = int(np.argmax(values))
    return make_certificate(
        CriterionId.HARMONIC_EXTENSION_CONDITION,
        float(values[index]),
        k * estimate.K_lower,
        notes=f"K_lower={estimate.K_lower!r} M_upper={estimate.M_upper!r} argmax z={complex(z[index])!r}",
        tol=tol,
    )


def dilatation_omega_f(spec: HarmonicMapSpec, z, tol: Optional[ToleranceSettings] = None):
    """omega_f = g'/h'."""
    tol = tol or config.tolerances
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    dh = _derivative(spec.h, z)
    small = np.abs(dh) < tol.critical_point
    if np.any(small):
        location = complex(z[np.argmax(small)])
        raise VanishingDenominator(f"|h'| vanishes at z={location}", location=location)
    omega = _derivative(spec.g, z) / dh
    return complex(omega[0]) if scalar else omega


def sup_omega_f(spec: HarmonicMapSpec, grid: Optional[int] = None) -> Tuple[float, complex]:
    """(max |omega_f|, argmax) over the domain samples."""
    z = _samples(spec.domain, grid)
    modulus = np.abs(dilatation_omega_f(spec, z))
    index = int(np.argmax(modulus))
    return float(modulus[index]), complex(z[index])


def bilipschitz_sample_check(
    spec: HarmonicMapSpec,
    eta: TruncatedSeries,
    k: float,
    pairs: Optional[int] = None,
    seed: int = 0,
    estimate: Optional[CoLipschitzEstimate] = None,
    tol: Optional[ToleranceSettings] = None,
) -> BilipschitzReport:
    """Count sampled pairs violating the lower or upper bi-Lipschitz bound."""
    tol = tol or config.tolerances
    pairs = config.harmonic.bilipschitz_pairs if pairs is None else pairs
    if pairs < 10_000:
        raise DomainError(f"need at least 10^4 pairs, got {pairs}")
    estimate = estimate or co_lipschitz_estimate(eta, spec.domain, tol=tol)
    lower = (1.0 - k) * estimate.K_lower
    upper = estimate.M_upper + k * estimate.K_lower

    rng = np.random.default_rng(seed)
    z1 = spec.domain.random_points(rng, pairs)
    z2 = spec.domain.random_points(rng, pairs)
    step = np.abs(z2 - z1)
    keep = step > 0
    step, z1, z2 = step[keep], z1[keep], z2[keep]
    image = np.abs(evaluate_harmonic(spec, z2) - evaluate_harmonic(spec, z1))
    slack = tol.bilipschitz_relative * step
    lower_violations = int(np.sum(image < lower * step - slack))
    upper_violations = int(np.sum(image > upper * step + slack))
    ratio = image / step
    if lower_violations or upper_violations:
        logger.warning(
            f"Bi-Lipschitz check: {lower_violations} lower and {upper_violations} upper violation(s)"
        )
    return BilipschitzReport(
        pairs=pairs,
        seed=seed,
        lower_constant=lower,
        upper_constant=upper,
        min_ratio=float(np.min(ratio)),
        max_ratio=float(np.max(ratio)),
        lower_violations=lower_violations,
        upper_violations=upper_violations,
    )
