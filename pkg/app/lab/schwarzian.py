"""
Schwarzian Derivative and Norm

S_f = f'''/f' - 3/2 (f''/f')^2 from exact third-order jets, the weighted
norm sup (1 - |z|^2)^2 |S_f(z)| over the unit disk, Mobius conjugation,
and the sharp extremal families z/(1 - k z^2) and its disk-automorphism
conjugates.
"""

from typing import Optional, Tuple

import numpy as np

from app.config import ToleranceSettings, config
from app.ds.meromorphic import PolarizedMeromorphic, jet_f
from app.ds.mobius import MobiusMap, disk_automorphism, mobius_inverse
from app.ds.series import ComplexLike, TruncatedSeries, jet
from app.exceptions import CriticalPointError, DomainError
from app.lab.certify import make_certificate
from app.logger import logger
from app.schema import Certificate, CriterionId, GridSpec, SchwarzianNormReport


class SeriesMap:
    """Analytic map given by a truncated series."""

    pole: Optional[float] = None

    def __init__(self, series: TruncatedSeries):
        self.series = series

    def jet(self, z: ComplexLike, order: int = 3) -> Tuple:
        return jet(self.series, z, order)


class MeromorphicMap:
    """Principal part plus Taylor tail; derivatives of the pole term are exact."""

    def __init__(self, f: PolarizedMeromorphic):
        self.f = f
        self.pole = f.p

    def jet(self, z: ComplexLike, order: int = 3) -> Tuple:
        return jet_f(self.f, z, order)


class ComposedMap:
    """outer o inner, third-order chain rule."""

    pole: Optional[float] = None

    def __init__(self, outer, inner):
        self.outer = as_map(outer)
        self.inner = as_map(inner)

    def jet(self, z: ComplexLike, order: int = 3) -> Tuple:
        g, g1, g2, g3 = self.inner.jet(z, 3)
        F, F1, F2, F3 = self.outer.jet(g, 3)
        values = (
            F,
            F1 * g1,
            F2 * g1**2 + F1 * g2,
            F3 * g1**3 + 3.0 * F2 * g1 * g2 + F1 * g3,
        )
        return values[: order + 1]


def as_map(obj):
    if isinstance(obj, TruncatedSeries):
        return SeriesMap(obj)
    if isinstance(obj, PolarizedMeromorphic):
        return MeromorphicMap(obj)
    if hasattr(obj, "jet"):
        return obj
    raise DomainError(f"cannot take derivatives of {type(obj).__name__}")


def _assemble(f1, f2, f3):
    ratio = f2 / f1
    return f3 / f1 - 1.5 * ratio**2


def schwarzian_at(f, z: ComplexLike, tol: Optional[ToleranceSettings] = None) -> ComplexLike:
    """S_f(z); CriticalPointError where |f'(z)| falls below the threshold."""
    tol = tol or config.tolerances
    _, f1, f2, f3 = as_map(f).jet(z, 3)
    modulus = np.abs(f1)
    if np.any(modulus < tol.critical_point):
        where = np.asarray(z).ravel()[int(np.argmin(np.ravel(modulus)))] if np.ndim(z) else z
        raise CriticalPointError(f"|f'| = {np.min(modulus):.3g} at z={where}")
    return _assemble(f1, f2, f3)


def schwarzian_fd(
    f, z: complex, radius: Optional[float] = None, nodes: Optional[int] = None
) -> complex:
    """
    Schwarzian from Taylor coefficients recovered by an FFT over a small circle.

    c_n = mean_j f(z + rho w_j) w_j^(-n) / rho^n with w_j the nodes-th roots of unity.
    """
    radius = config.schwarzian.fd_radius if radius is None else radius
    nodes = config.schwarzian.fd_nodes if nodes is None else nodes
    w = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    values = as_map(f).jet(z + radius * w, 0)[0]
    c = np.fft.fft(values) / nodes / radius ** np.arange(nodes)
    return complex(_assemble(c[1], 2.0 * c[2], 6.0 * c[3]))


def f0_series(k: float, N: Optional[int] = None) -> TruncatedSeries:
    """z / (1 - k z^2) = sum_j k^j z^(2j+1)."""
    if not (0.0 <= k < 1.0):
        raise DomainError(f"k must lie in [0, 1), got {k}")
    if N is None:
        N = config.series.default_truncation
        j = np.arange(1, config.series.laurent_cap)
        # keep the dropped third-derivative terms below 1e-17 on |z| <= 1
        small = np.nonzero((2.0 * j + 1) ** 3 * k**j < 1e-17)[0]
        if small.size:
            N = max(N, int(2 * j[small[0]] + 1))
    coefficients = np.zeros(N + 1)
    index = np.arange(1, N + 1, 2)
    coefficients[index] = k ** ((index - 1) // 2)
    return TruncatedSeries(coefficients=coefficients)


def fp_map(k: float, p: float, N: Optional[int] = None) -> ComposedMap:
    """f0 o phi^-1 with phi(z) = (z + p)/(1 + p z)."""
    return ComposedMap(f0_series(k, N), mobius_inverse(disk_automorphism(p)))


def conjugate_schwarzian(f, phi: MobiusMap, z: complex) -> Tuple[complex, complex]:
    """
    S_{f o phi}(z) two ways: directly from the composed jet, and by the
    composition law S_f(phi(z)) phi'(z)^2 + S_phi(z) with S_phi = 0.
    """
    direct = schwarzian_at(ComposedMap(f, phi), z)
    w, dphi = phi.jet(z, 1)
    law = schwarzian_at(f, w) * dphi**2
    return complex(direct), complex(law)


def _weighted(fmap, z: np.ndarray, tol: ToleranceSettings) -> np.ndarray:
    """(1 - |z|^2)^2 |S_f(z)|, zero at samples within the pole guard."""
    result = np.zeros(z.shape)
    keep = np.ones(z.shape, dtype=bool)
    if getattr(fmap, "pole", None) is not None:
        keep = np.abs(z - fmap.pole) > tol.pole_guard
    if np.any(keep):
        s = schwarzian_at(fmap, z[keep], tol)
        result[keep] = (1.0 - np.abs(z[keep]) ** 2) ** 2 * np.abs(s)
    return result


def schwarzian_norm(
    f,
    radial_count: Optional[int] = None,
    angular_count: Optional[int] = None,
    max_radius: Optional[float] = None,
    refinements: Optional[int] = None,
    tol: Optional[ToleranceSettings] = None,
) -> SchwarzianNormReport:
    """
    Polar-grid estimate of sup (1 - |z|^2)^2 |S_f(z)| with local refinement.

    Grid ties go to the smaller radius, then the smaller angle. Each
    refinement round scans a 5x5 patch around the running argmax and
    halves the patch spacing; it stops once a round improves by less than
    the configured amount.
    """
    settings = config.schwarzian
    tol = tol or config.tolerances
    radial_count = settings.radial_count if radial_count is None else radial_count
    angular_count = settings.angular_count if angular_count is None else angular_count
    max_radius = settings.max_radius if max_radius is None else max_radius
    refinements = settings.refinements if refinements is None else refinements
    fmap = as_map(f)

    radii = np.linspace(0.0, max_radius, radial_count)
    theta = 2.0 * np.pi * np.arange(angular_count) / angular_count
    points = radii[:, None] * np.exp(1j * theta)[None, :]
    weighted = _weighted(fmap, points.ravel(), tol).reshape(points.shape)
    flat = int(np.argmax(weighted))
    best = float(weighted.flat[flat])
    best_z = complex(points.flat[flat])

    h = max(radii[1] - radii[0], abs(best_z) * (theta[1] - theta[0]))
    offsets = np.arange(-2, 3)
    patch = (offsets[None, :] + 1j * offsets[:, None]).ravel()
    converged = False
    rounds = 0
    for rounds in range(1, refinements + 1):
        candidates = best_z + h * patch
        candidates = candidates[np.abs(candidates) <= max_radius]
        values = _weighted(fmap, candidates, tol)
        index = int(np.argmax(values))
        improvement = float(values[index]) - best
        if improvement > 0:
            best, best_z = float(values[index]), complex(candidates[index])
        h /= 2.0
        if improvement < tol.schwarzian_improvement:
            converged = True
            break

    if not converged:
        logger.warning(f"Schwarzian norm refinement did not settle after {rounds} rounds")
    logger.debug(f"Schwarzian norm ~ {best:.17g} at z={best_z} after {rounds} rounds")
    return SchwarzianNormReport(
        norm_estimate=best,
        argmax_z=best_z,
        grid_spec=GridSpec(
            radial_count=radial_count, angular_count=angular_count, radial_range=(0.0, max_radius)
        ),
        refinement_count=rounds,
        convergence_flag=converged,
        points=points.ravel(),
        weighted=weighted.ravel(),
    )


def check_schwarzian_bound(
    f, k: float, p: float, tol: Optional[ToleranceSettings] = None, report: Optional[SchwarzianNormReport] = None
) -> Certificate:
    """||S_f|| <= 6k / (1 - p^2)^2 within the configured slack."""
    tol = tol or config.tolerances
    if not (0.0 <= k < 1.0) or not (0.0 <= p < 1.0):
        raise DomainError(f"need 0 <= k < 1 and 0 <= p < 1, got k={k} p={p}")
    report = report or schwarzian_norm(f, tol=tol)
    bound = 6.0 * k / (1.0 - p**2) ** 2
    notes = f"argmax z={report.argmax_z!r} converged={report.convergence_flag}"
    if p > 0.0:
        # the weighted norm is invariant under disk automorphisms
        extremal = 6.0 * k
        notes += (
            f"; f0 o phi^-1 has norm 6k={extremal:.6g}, "
            f"slack up to {bound - extremal:.6g} is expected for that family"
        )
    return make_certificate(
        CriterionId.SCHWARZIAN_NORM_BOUND,
        report.norm_estimate,
        bound + tol.schwarzian_bound,
        notes=notes,
        tol=tol,
    )
