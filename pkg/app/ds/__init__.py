"""
Value Types for qcx

- TruncatedSeries / TailBound: truncated power series with tail bookkeeping
- PrincipalPart / PolarizedMeromorphic / LaurentTail: functions with a pole of order m
- MobiusMap: normalized fractional-linear maps
- ConvexDomain: disks and convex polygons
- PlanarKDTree: spatial index over complex sample points
"""

from app.ds.domains import ConvexDomain, DomainKind
from app.ds.meromorphic import LaurentTail, PolarizedMeromorphic, PrincipalPart
from app.ds.mobius import MobiusMap
from app.ds.series import TailBound, TruncatedSeries
from app.ds.spatial_index import PlanarKDTree

__all__ = [
    "ConvexDomain",
    "DomainKind",
    "LaurentTail",
    "MobiusMap",
    "PlanarKDTree",
    "PolarizedMeromorphic",
    "PrincipalPart",
    "TailBound",
    "TruncatedSeries",
]
