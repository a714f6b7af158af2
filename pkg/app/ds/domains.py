"""
Bounded Convex Domains

Disks and counterclockwise convex polygons, with membership tests and the
sample sets used by the harmonic-extension checks.
"""

from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, model_validator

from app.exceptions import DomainError


class DomainKind(str, Enum):
    DISK = "disk"
    POLYGON = "polygon"


class ConvexDomain(BaseModel):
    kind: DomainKind
    center: complex = 0j
    radius: float = 1.0
    vertices: Optional[List[complex]] = None

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _certify_convexity(self) -> "ConvexDomain":
        if self.kind == DomainKind.DISK:
            if not self.radius > 0:
                raise DomainError(f"disk radius must be positive, got {self.radius}")
            return self
        if not self.vertices or len(self.vertices) < 3:
            raise DomainError("polygon needs at least three vertices")
        v = np.asarray(self.vertices, dtype=np.complex128)
        edges = np.roll(v, -1) - v
        nxt = np.roll(edges, -1)
        cross = edges.real * nxt.imag - edges.imag * nxt.real
        if np.any(cross < 0):
            raise DomainError("polygon vertices must be convex and counterclockwise")
        if not np.any(cross > 0):
            raise DomainError("polygon is degenerate (all vertices collinear)")
        return self

    @property
    def vertex_array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=np.complex128)

    @property
    def centroid(self) -> complex:
        if self.kind == DomainKind.DISK:
            return complex(self.center)
        return complex(self.vertex_array.mean())

    def bounding_radius(self) -> float:
        """max |z| over the closed domain."""
        if self.kind == DomainKind.DISK:
            return abs(self.center) + self.radius
        return float(np.max(np.abs(self.vertex_array)))

    def contains(self, z) -> np.ndarray:
        """Closed-domain membership, vectorized."""
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == DomainKind.DISK:
            return np.abs(z - self.center) <= self.radius * (1 + 1e-12)
        v = self.vertex_array
        inside = np.ones(z.shape, dtype=bool)
        for start, end in zip(v, np.roll(v, -1)):
            edge = end - start
            rel = z - start
            inside &= edge.real * rel.imag - edge.imag * rel.real >= -1e-12 * abs(edge)
        return inside

    def boundary_at(self, t) -> np.ndarray:
        """Boundary point at perimeter fraction t (taken mod 1), counterclockwise."""
        t = np.mod(np.asarray(t, dtype=np.float64), 1.0)
        if self.kind == DomainKind.DISK:
            return self.center + self.radius * np.exp(2j * np.pi * t)
        v = self.vertex_array
        edges = np.roll(v, -1) - v
        lengths = np.abs(edges)
        cumulative = np.concatenate([[0.0], np.cumsum(lengths)])
        s = cumulative[-1] * t
        edge_index = np.clip(np.searchsorted(cumulative, s, side="right") - 1, 0, v.size - 1)
        fraction = (s - cumulative[edge_index]) / lengths[edge_index]
        return v[edge_index] + fraction * edges[edge_index]

    def boundary(self, samples: int) -> np.ndarray:
        """`samples` points along the boundary, counterclockwise."""
        return self.boundary_at(np.arange(samples) / samples)

    def lattice(self, grid: int) -> np.ndarray:
        """(grid+1) x (grid+1) Cartesian lattice over the bounding box, clipped to the domain."""
        if self.kind == DomainKind.DISK:
            lo_x, hi_x = self.center.real - self.radius, self.center.real + self.radius
            lo_y, hi_y = self.center.imag - self.radius, self.center.imag + self.radius
        else:
            v = self.vertex_array
            lo_x, hi_x = v.real.min(), v.real.max()
            lo_y, hi_y = v.imag.min(), v.imag.max()
        x = np.linspace(lo_x, hi_x, grid + 1)
        y = np.linspace(lo_y, hi_y, grid + 1)
        points = (x[None, :] + 1j * y[:, None]).ravel()
        return points[self.contains(points)]

    def random_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Uniform samples by rejection from the bounding box."""
        if self.kind == DomainKind.DISK:
            lo = self.center - self.radius * (1 + 1j)
            span = 2.0 * self.radius * (1 + 1j)
        else:
            v = self.vertex_array
            lo = complex(v.real.min(), v.imag.min())
            span = complex(v.real.max() - lo.real, v.imag.max() - lo.imag)
        accepted: List[np.ndarray] = []
        total = 0
        while total < count:
            draw = rng.random((2 * count, 2))
            z = lo + draw[:, 0] * span.real + 1j * draw[:, 1] * span.imag
            z = z[self.contains(z)]
            accepted.append(z)
            total += z.size
        return np.concatenate(accepted)[:count]


def disk(center: complex = 0j, radius: float = 1.0) -> ConvexDomain:
    return ConvexDomain(kind=DomainKind.DISK, center=center, radius=radius)


def polygon(vertices) -> ConvexDomain:
    return ConvexDomain(kind=DomainKind.POLYGON, vertices=[complex(v) for v in vertices])


def sample_domain(domain: ConvexDomain, grid: int, boundary: int) -> np.ndarray:
    """Interior lattice, the domain centre and boundary samples in one array."""
    return np.concatenate(
        [domain.lattice(grid), [domain.centroid], domain.boundary(boundary)]
    )
