"""
Quasiconformal Extensions

Two explicit continuations of f = R + omega past the unit circle:

- ReflectOmega:  F(z) = R(z) + omega(1/conj(z))            for |z| > 1
- ExtremalTail:  F(z) = R(z) + a0 + a1 / (conj(z) - p)      for |z| > 1

plus the sampled quantities that certify them: the complex dilatation
field, the non-degeneracy constant of the exterior form, the boundary
supremum of |omega'|, and sampled injectivity diagnostics.
"""

from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, model_validator

from app.config import ToleranceSettings, config
from app.ds.meromorphic import (
    PolarizedMeromorphic,
    PrincipalPart,
    evaluate_f,
    exterior_form,
    extremal_area_function,
    principal_jet,
    principal_value,
)
from app.ds.series import TruncatedSeries, differentiate, dilate, evaluate
from app.ds.spatial_index import PlanarKDTree
from app.exceptions import (
    DegeneratePrincipalPart,
    DilatationNotContractive,
    DomainError,
    OmegaBoundViolation,
    VanishingDenominator,
    ZeroOnBoundary,
)
from app.logger import logger
from app.schema import (
    DilatationField,
    ExteriorRule,
    GridSpec,
    InjectivityReport,
    NonDegeneracyEstimate,
)

REPORTED_ITEMS = 100


def distortion_from_dilatation(k: float) -> float:
    """K = (1 + k) / (1 - k)."""
    if not (0.0 <= k < 1.0):
        raise DomainError(f"k must lie in [0, 1), got {k}")
    return (1.0 + k) / (1.0 - k)


def dilatation_from_distortion(K: float) -> float:
    """k = (K - 1) / (K + 1)."""
    if K < 1.0:
        raise DomainError(f"maximal dilatation K must be at least 1, got {K}")
    return (K - 1.0) / (K + 1.0)


class ExtensionMap(BaseModel):
    """
    F = f on the closed disk, continued by `exterior_rule` outside.

    For ReflectOmega the interior Taylor part is omega itself; for
    ExtremalTail it is a0 + a1 z / (1 - p z).
    """

    interior: PolarizedMeromorphic
    exterior_rule: ExteriorRule
    k: float
    a0: complex = 0j
    a1: complex = 0j
    enforce_bound: bool = True
    kappa: Optional[float] = None
    omega_sup: Optional[float] = None
    nondegeneracy: Optional[NonDegeneracyEstimate] = None

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @model_validator(mode="after")
    def _check_tail(self) -> "ExtensionMap":
        if (
            self.exterior_rule == ExteriorRule.EXTREMAL_TAIL
            and self.enforce_bound
            and abs(self.a1) > self.k + config.tolerances.equality_snap
        ):
            raise DomainError(f"extremal tail needs |a1| <= k, got |a1|={abs(self.a1)} k={self.k}")
        return self

    @property
    def p(self) -> float:
        return self.interior.p

    @property
    def principal(self) -> PrincipalPart:
        return self.interior.principal

    @property
    def omega(self) -> TruncatedSeries:
        return self.interior.taylor


def _interior_value(E: ExtensionMap, z: np.ndarray) -> np.ndarray:
    if E.exterior_rule == ExteriorRule.EXTREMAL_TAIL:
        # closed form, so the seam does not depend on the stored truncation
        return principal_value(E.principal, z) + E.a0 + E.a1 * z / (1.0 - E.p * z)
    return evaluate_f(E.interior, z)


def _exterior_value(E: ExtensionMap, z: np.ndarray) -> np.ndarray:
    zbar = np.conj(z)
    if E.exterior_rule == ExteriorRule.EXTREMAL_TAIL:
        return principal_value(E.principal, z) + E.a0 + E.a1 / (zbar - E.p)
    return principal_value(E.principal, z) + evaluate(E.omega, 1.0 / zbar)


def evaluate_extension(E: ExtensionMap, z):
    """F(z): interior rule on |z| <= 1, exterior rule beyond."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    inside = np.abs(z) <= 1.0
    values = np.empty_like(z)
    if np.any(inside):
        values[inside] = _interior_value(E, z[inside])
    if np.any(~inside):
        values[~inside] = _exterior_value(E, z[~inside])
    return complex(values[0]) if scalar else values


def seam_gap(E: ExtensionMap, samples: int = 1024) -> float:
    """max |interior(z) - exterior(z)| over `samples` points of |z| = 1."""
    z = np.exp(2j * np.pi * np.arange(samples) / samples)
    return float(np.max(np.abs(_interior_value(E, z) - _exterior_value(E, z))))


def _wirtinger_exterior(E: ExtensionMap, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(dF/dz, dF/dzbar) of the exterior rule, closed form."""
    dz = principal_jet(E.principal, z, 1)[1]
    zbar = np.conj(z)
    if E.exterior_rule == ExteriorRule.EXTREMAL_TAIL:
        dzbar = -E.a1 / (zbar - E.p) ** 2
    elif E.omega.truncation_order < 1:
        dzbar = np.zeros_like(z)
    else:
        dzbar = -evaluate(differentiate(E.omega), 1.0 / zbar) / zbar**2
    return dz, dzbar


def dilatation_analytic(E: ExtensionMap, z, tol: Optional[ToleranceSettings] = None):
    """mu = dF/dzbar / dF/dz at exterior points |z| > 1."""
    tol = tol or config.tolerances
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if np.any(np.abs(z) <= 1.0):
        raise DomainError("dilatation of the exterior rule needs |z| > 1")
    dz, dzbar = _wirtinger_exterior(E, z)
    small = np.abs(dz) < tol.vanishing_denominator
    if np.any(small):
        location = complex(z[np.argmax(small)])
        raise VanishingDenominator(f"|dF/dz| vanishes at z={location}", location=location)
    mu = dzbar / dz
    return complex(mu[0]) if scalar else mu


def dilatation_fd_oracle(E: ExtensionMap, z: complex, h: float = 1e-4) -> complex:
    """Central-difference Wirtinger derivatives of F."""
    if not (1e-6 <= h <= 1e-3):
        raise DomainError(f"step h must lie in [1e-6, 1e-3], got {h}")
    if abs(z) <= 1.0 + 2.0 * h:
        raise DomainError(f"finite differences need |z| > 1 + 2h, got |z|={abs(z)}")
    stencil = np.array([z + h, z - h, z + 1j * h, z - 1j * h])
    f_px, f_mx, f_py, f_my = evaluate_extension(E, stencil)
    dx = f_px - f_mx
    dy = f_py - f_my
    dz = (dx - 1j * dy) / (4.0 * h)
    dzbar = (dx + 1j * dy) / (4.0 * h)
    return complex(dzbar / dz)


def sup_dilatation(
    E: ExtensionMap,
    R: Optional[float] = None,
    radial_count: Optional[int] = None,
    angular_count: Optional[int] = None,
) -> DilatationField:
    """
    |mu| over a log-radial x uniform-angular grid on 1 < |z| <= R.

    Ties for the maximum go to the smallest angular index, then the
    smallest radial index.
    """
    settings = config.extension
    R = settings.exterior_radius if R is None else R
    radial_count = settings.radial_count if radial_count is None else radial_count
    angular_count = settings.angular_count if angular_count is None else angular_count
    if R < 2.0:
        raise DomainError(f"outer radius must be at least 2, got {R}")
    if radial_count < 64 or angular_count < 256:
        raise DomainError(f"grid must be at least 64x256, got {radial_count}x{angular_count}")

    radii = np.exp(np.linspace(0.0, np.log(R), radial_count + 1))[1:]
    theta = 2.0 * np.pi * np.arange(angular_count) / angular_count
    points = radii[None, :] * np.exp(1j * theta)[:, None]
    mu = dilatation_analytic(E, points.ravel()).reshape(points.shape)
    modulus = np.abs(mu)
    flat = int(np.argmax(modulus))
    sup = float(modulus.flat[flat])
    logger.debug(f"sup|mu| = {sup:.17g} at {points.flat[flat]}")
    return DilatationField(
        points=points,
        mu=mu,
        sup_abs_mu=sup,
        argmax_z=complex(points.flat[flat]),
        grid_spec=GridSpec(
            radial_count=radial_count, angular_count=angular_count, radial_range=(1.0, R)
        ),
    )


def _boundary(samples: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(samples) / samples)


def sup_omega_derivative(omega: TruncatedSeries) -> Tuple[float, float]:
    """
    Boundary maximum of |omega'| (maximum modulus principle).

    Returns the fine-grid maximum and a Richardson estimate built from the
    coarse and fine grids.
    """
    if omega.declared_radius < 1.0:
        raise DomainError("omega must be trusted on the closed unit disk")
    if omega.truncation_order < 1:
        return 0.0, 0.0
    derivative = differentiate(omega)
    coarse = float(np.max(np.abs(evaluate(derivative, _boundary(config.extension.coarse_boundary_samples)))))
    fine = float(np.max(np.abs(evaluate(derivative, _boundary(config.extension.boundary_samples)))))
    return fine, max(fine, fine + (fine - coarse) / 3.0)


def nondegeneracy_constant(
    f: PolarizedMeromorphic,
    boundary_samples: Optional[int] = None,
    tol: Optional[ToleranceSettings] = None,
) -> NonDegeneracyEstimate:
    """
    C = inf over the closed disk of |R~'|.

    Zero-freeness comes from the winding number of R~' around |zeta| = 1;
    if it vanishes the minimum sits on the boundary, otherwise C = 0.
    """
    tol = tol or config.tolerances
    samples = config.extension.boundary_samples if boundary_samples is None else boundary_samples
    if samples < 4096:
        raise DomainError(f"need at least 4096 boundary samples, got {samples}")
    derivative = differentiate(exterior_form(f))
    zeta = _boundary(samples)
    values = evaluate(derivative, zeta)
    modulus = np.abs(values)
    index = int(np.argmin(modulus))
    if modulus[index] < tol.zero_on_boundary:
        raise ZeroOnBoundary(f"R~' vanishes near zeta={zeta[index]} on the unit circle")

    increments = np.angle(np.roll(values, -1) / values)
    winding = int(np.rint(np.sum(increments) / (2.0 * np.pi)))
    zero_free = winding == 0
    C = float(modulus[index]) if zero_free else 0.0
    logger.debug(f"Non-degeneracy: winding={winding} C={C:.17g}")
    return NonDegeneracyEstimate(
        C=C,
        argmin_zeta=complex(zeta[index]),
        zero_free_certified=zero_free,
        winding_number=winding,
        samples=samples,
    )


def build_extension(
    f: PolarizedMeromorphic,
    omega: Optional[TruncatedSeries] = None,
    k: float = 0.0,
    dilation: float = 1.0,
    tol: Optional[ToleranceSettings] = None,
) -> ExtensionMap:
    """
    ReflectOmega extension of R + omega.

    Requires sup|omega'| <= k/(1+p)^(m+1), a zero-free R~' and a contractive
    kappa = (k/(1+p)^(m+1)) / C. `dilation` < 1 replaces omega by
    omega(dilation * z).
    """
    tol = tol or config.tolerances
    if not (0.0 <= k < 1.0):
        raise DomainError(f"k must lie in [0, 1), got {k}")
    omega = f.taylor if omega is None else omega
    if dilation < 1.0:
        omega = dilate(omega, dilation)

    bound = k / (1.0 + f.p) ** (f.m + 1)
    sup, estimate = sup_omega_derivative(omega)
    if estimate > bound + tol.omega_bound:
        raise OmegaBoundViolation(
            f"sup|omega'| ~ {estimate:.17g} exceeds k/(1+p)^(m+1) = {bound:.17g}"
        )

    nondegeneracy = nondegeneracy_constant(f, tol=tol)
    if nondegeneracy.C == 0.0:
        raise DegeneratePrincipalPart(
            f"R~' has {nondegeneracy.winding_number} zero(s) in the disk; C = 0"
        )
    kappa = bound / nondegeneracy.C
    if kappa >= 1.0:
        raise DilatationNotContractive(f"kappa = {kappa:.17g} is not below one")

    logger.info(f"ReflectOmega extension: p={f.p} m={f.m} k={k} kappa={kappa:.6g}")
    return ExtensionMap(
        interior=f.model_copy(update={"taylor": omega}),
        exterior_rule=ExteriorRule.REFLECT_OMEGA,
        k=k,
        kappa=kappa,
        omega_sup=sup,
        nondegeneracy=nondegeneracy,
    )


def extremal_extension(
    principal: PrincipalPart,
    a0: complex,
    a1: complex,
    k: float,
    enforce_bound: bool = True,
    N: Optional[int] = None,
) -> ExtensionMap:
    """ExtremalTail extension of R + a0 + a1 z/(1 - p z)."""
    if not (0.0 <= k < 1.0):
        raise DomainError(f"k must lie in [0, 1), got {k}")
    return ExtensionMap(
        interior=extremal_area_function(principal, a0, a1, N),
        exterior_rule=ExteriorRule.EXTREMAL_TAIL,
        k=k,
        a0=a0,
        a1=a1,
        enforce_bound=enforce_bound,
    )


def _sample_disk(rng: np.random.Generator, count: int, radius: float, p: float, exclusion: float) -> np.ndarray:
    points = np.empty(0, dtype=np.complex128)
    while points.size < count:
        r = radius * np.sqrt(rng.random(count))
        theta = 2.0 * np.pi * rng.random(count)
        draw = r * np.exp(1j * theta)
        points = np.concatenate([points, draw[np.abs(draw - p) > exclusion]])
    return points[:count]


def injectivity_sample_check(
    E: ExtensionMap,
    pairs: Optional[int] = None,
    seed: int = 0,
    radius: Optional[float] = None,
    tol: Optional[ToleranceSettings] = None,
) -> InjectivityReport:
    """
    Sampled surrogate for F being a homeomorphism.

    Collisions: preimages more than the preimage tolerance apart whose
    images are within the image tolerance, from the drawn pairs and from a
    KD-tree scan over all sampled images. Folds: exterior samples with
    |mu| > 1, where the Jacobian |dF|^2 - |dF/dzbar|^2 turns negative.
    """
    tol = tol or config.tolerances
    pairs = config.extension.injectivity_pairs if pairs is None else pairs
    radius = config.extension.injectivity_radius if radius is None else radius
    if pairs < 10_000:
        raise DomainError(f"need at least 10^4 pairs, got {pairs}")

    rng = np.random.default_rng(seed)
    points = _sample_disk(rng, 2 * pairs, radius, E.p, tol.collision_preimage)
    images = evaluate_extension(E, points)

    collisions = []
    z1, z2 = points[:pairs], points[pairs:]
    w1, w2 = images[:pairs], images[pairs:]
    direct = (np.abs(z1 - z2) > tol.collision_preimage) & (np.abs(w1 - w2) < tol.collision_image)
    collisions.extend(zip(z1[direct].tolist(), z2[direct].tolist()))

    tree = PlanarKDTree().build(images)
    for i, j in tree.close_pairs(tol.collision_image):
        if abs(points[i] - points[j]) > tol.collision_preimage:
            collisions.append((complex(points[i]), complex(points[j])))

    exterior = points[np.abs(points) > 1.0]
    folds = exterior[np.abs(dilatation_analytic(E, exterior, tol)) > 1.0] if exterior.size else exterior

    if collisions or folds.size:
        logger.warning(
            f"Injectivity check found {len(collisions)} collision(s) and {folds.size} fold sample(s)"
        )
    return InjectivityReport(
        pairs=pairs,
        seed=seed,
        sampled_points=points.size,
        collision_count=len(collisions),
        fold_count=int(folds.size),
        collisions=collisions[:REPORTED_ITEMS],
        folds=folds[:REPORTED_ITEMS].tolist(),
    )
