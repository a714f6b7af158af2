"""
Area Quantities

Dirichlet integral of the Taylor part, the area of the region omitted by
f(|z| < r) from the two Laurent energies, and two independent numerical
oracles (shoelace area of the sampled image curve and a direct quadrature
of |f'|^2).
"""

import math
import warnings
from typing import Optional, Tuple, Union

import numpy as np

from app.config import config
from app.ds.meromorphic import (
    LaurentTail,
    PolarizedMeromorphic,
    default_laurent_order,
    evaluate_f,
    laurent_recentre,
)
from app.ds.series import TruncatedSeries, check_radius, differentiate, evaluate, geometric_tail_estimate
from app.ds.spatial_index import PlanarKDTree
from app.exceptions import DomainError, SelfIntersectionWarning
from app.logger import logger
from app.schema import AreaReport


def _taylor_of(f: Union[PolarizedMeromorphic, TruncatedSeries]) -> TruncatedSeries:
    return f.taylor if isinstance(f, PolarizedMeromorphic) else f


def taylor_energy(f: Union[PolarizedMeromorphic, TruncatedSeries], r: float) -> Tuple[float, float]:
    """
    T(r) = sum n |a_n|^2 r^(2n) and the estimated remainder.

    A series without a TailBound is an exact polynomial and has no remainder.
    """
    s = _taylor_of(f)
    a = s.coefficients
    n = np.arange(a.size, dtype=np.float64)
    terms = n * np.abs(a) ** 2 * r ** (2.0 * n)
    remainder = geometric_tail_estimate(terms[1:]) if s.tail is not None else 0.0
    return math.fsum(terms[1:]), remainder


def laurent_energy(tail: LaurentTail, r: float) -> Tuple[float, float]:
    """P(r) = sum k |c_{-k}|^2 r^(-2k) and the estimated remainder (0 for a terminating expansion)."""
    k = np.arange(1, tail.order + 1, dtype=np.float64)
    with np.errstate(divide="ignore"):
        terms = k * np.exp(2.0 * (np.log(np.abs(tail.coefficients)) - k * np.log(r)))
    remainder = geometric_tail_estimate(terms) if tail.tail_estimate > 0 else 0.0
    return math.fsum(terms), remainder


def dirichlet_integral(f: Union[PolarizedMeromorphic, TruncatedSeries], r: float) -> float:
    """pi * sum n |a_n|^2 r^(2n) over the Taylor part."""
    if not (0.0 < r <= 1.0):
        raise DomainError(f"r must lie in (0, 1], got {r}")
    check_radius(_taylor_of(f), r)
    energy, tail = taylor_energy(f, r)
    logger.debug(f"Dirichlet integral r={r}: T={energy:.17g} tail~{tail:.3g}")
    return math.pi * energy


def complement_area_series(
    f: PolarizedMeromorphic, r: float, K: Optional[int] = None
) -> AreaReport:
    """pi |P(r) - T(r)| with P from the re-centred Laurent coefficients."""
    if not (f.p < r <= 1.0):
        raise DomainError(f"r must lie in (p, 1] = ({f.p}, 1], got {r}")
    check_radius(f.taylor, r)
    K = default_laurent_order(f.principal, r) if K is None else K
    tail = laurent_recentre(f, K)
    P, p_tail = laurent_energy(tail, r)
    T, t_tail = taylor_energy(f, r)
    difference = P - T
    logger.debug(f"Complement area r={r}: P={P:.17g} T={T:.17g} K={K}")
    return AreaReport(
        r=r,
        taylor_energy=T,
        laurent_energy=P,
        complement_area=math.pi * abs(difference),
        tail_estimate=p_tail + t_tail,
        sign=int(np.sign(difference)),
        laurent_order=K,
    )


def simple_pole_closed_form(f: PolarizedMeromorphic, r: float) -> float:
    """pi | |a_-1|^2 r^2 / (r^2 - p^2)^2 - T(r) |, valid for a simple pole only."""
    if f.m != 1:
        raise DomainError(f"closed form needs a simple pole, got order {f.m}")
    if not (f.p < r <= 1.0):
        raise DomainError(f"r must lie in (p, 1] = ({f.p}, 1], got {r}")
    a = abs(f.principal.coefficients[0])
    P = a**2 * r**2 / (r**2 - f.p**2) ** 2
    T, _ = taylor_energy(f, r)
    return math.pi * abs(P - T)


def sample_image_curve(
    f: PolarizedMeromorphic, r: float, samples: int
) -> Tuple[np.ndarray, np.ndarray]:
    """theta and f(r e^{i theta}) at `samples` equispaced angles."""
    theta = 2.0 * np.pi * np.arange(samples) / samples
    return theta, evaluate_f(f, r * np.exp(1j * theta))


def _segments_cross(a0, a1, b0, b1) -> np.ndarray:
    """Proper crossing test for segment pairs a0-a1 and b0-b1 (vectorized)."""

    def orient(p, q, s):
        d1, d2 = q - p, s - p
        return d1.real * d2.imag - d1.imag * d2.real

    o1, o2 = orient(a0, a1, b0), orient(a0, a1, b1)
    o3, o4 = orient(b0, b1, a0), orient(b0, b1, a1)
    return (o1 * o2 < 0) & (o3 * o4 < 0)


def find_self_intersections(curve: np.ndarray) -> np.ndarray:
    """
    Index pairs (i, j) of non-adjacent edges of the closed polygon that cross.

    Candidates come from a KD-tree over edge midpoints: two edges can only
    meet when their midpoints are within the longest edge length.
    """
    start = curve
    end = np.roll(curve, -1)
    midpoints = 0.5 * (start + end)
    reach = float(np.max(np.abs(end - start)))
    tree = PlanarKDTree().build(midpoints)
    pairs = np.array(tree.close_pairs(reach), dtype=np.int64).reshape(-1, 2)
    if pairs.size == 0:
        return pairs
    n = curve.size
    gap = np.abs(pairs[:, 0] - pairs[:, 1])
    pairs = pairs[(gap > 1) & (gap < n - 1)]
    i, j = pairs[:, 0], pairs[:, 1]
    crossing = _segments_cross(start[i], end[i], start[j], end[j])
    return pairs[crossing]


def complement_area_curve_oracle(
    f: PolarizedMeromorphic, r: float, samples: Optional[int] = None
) -> float:
    """|shoelace area| of the polygon through f(r e^{i theta})."""
    samples = config.area.curve_samples if samples is None else samples
    if not (f.p < r <= f.taylor.declared_radius):
        raise DomainError(f"r must lie in (p, radius] = ({f.p}, {f.taylor.declared_radius}], got {r}")
    if samples < 1024:
        raise DomainError(f"curve oracle needs at least 1024 samples, got {samples}")
    _, w = sample_image_curve(f, r, samples)
    # 1/2 sum Im(conj(w_i) w_{i+1}), compensated
    cross = (np.conj(w) * np.roll(w, -1)).imag
    signed = 0.5 * math.fsum(cross)

    crossings = find_self_intersections(w)
    if crossings.size:
        logger.warning(f"Image curve at r={r} self-intersects on {len(crossings)} edge pairs")
        warnings.warn(
            f"sampled image of |z|={r} crosses itself ({len(crossings)} edge pairs)",
            SelfIntersectionWarning,
            stacklevel=2,
        )
    return abs(signed)


def dirichlet_quadrature_oracle(
    s: TruncatedSeries, r: float, grid: Optional[int] = None, supersampling: Optional[int] = None
) -> float:
    """
    Midpoint-rule integral of |s'|^2 over |z| < r on a grid x grid mesh.

    Cells cut by the circle are integrated on a supersampling^2 sub-mesh
    so that only the covered fraction contributes.
    """
    grid = config.area.quadrature_grid if grid is None else grid
    supersampling = config.area.supersampling if supersampling is None else supersampling
    if not (0.0 < r <= s.declared_radius):
        raise DomainError(f"r must lie in (0, {s.declared_radius}], got {r}")
    if s.truncation_order < 1:
        return 0.0
    derivative = differentiate(s)

    h = 2.0 * r / grid
    centers = -r + h * (np.arange(grid) + 0.5)
    x, y = np.meshgrid(centers, centers)
    # farthest and nearest distance from the origin over each cell
    far = np.hypot(np.abs(x) + h / 2, np.abs(y) + h / 2)
    near = np.hypot(np.maximum(np.abs(x) - h / 2, 0.0), np.maximum(np.abs(y) - h / 2, 0.0))
    inside = far <= r
    cut = ~inside & (near < r)

    z_inside = x[inside] + 1j * y[inside]
    total = np.sum(np.abs(evaluate(derivative, z_inside)) ** 2) * h * h

    offsets = h * ((np.arange(supersampling) + 0.5) / supersampling - 0.5)
    ox, oy = np.meshgrid(offsets, offsets)
    sub = (x[cut][:, None] + ox.ravel()[None, :]) + 1j * (y[cut][:, None] + oy.ravel()[None, :])
    sub = sub[np.abs(sub) <= r]
    total += np.sum(np.abs(evaluate(derivative, sub)) ** 2) * (h / supersampling) ** 2
    return float(total)
