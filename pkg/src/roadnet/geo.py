"""Geographic primitives: coordinates, great-circle distances, an
equirectangular projection, and polygon containment.

All distances are in kilometres on a sphere of radius 6371.0 km.  Planar
work uses an equirectangular projection about a reference coordinate; over
a window a few degrees across the distortion is below one percent, and the
same projection is applied to observed and simulated points alike so
comparisons between them are unbiased.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from roadnet.errors import InputError
from roadnet.kernels import haversine_matrix

EARTH_RADIUS_KM = 6371.0

_DEG = math.pi / 180.0


@dataclass(frozen=True)
class GeoCoord:
    """A WGS-style latitude/longitude pair in decimal degrees."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise InputError(f"coordinate must be finite, got ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise InputError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise InputError(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True)
class PlanarPoint:
    """Projected position in km east (x) and north (y) of a reference."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InputError(f"planar point must be finite, got ({self.x}, {self.y})")


def _normalize_ring(ring):
    """Close a ring (first vertex == last) and check it has >= 3 vertices."""
    verts = list(ring)
    if len(verts) >= 2 and verts[0] == verts[-1]:
        verts = verts[:-1]
    if len(verts) < 3:
        raise InputError(f"polygon ring needs >= 3 vertices, got {len(verts)}")
    return tuple(verts + [verts[0]])


@dataclass(frozen=True)
class RegionPolygon:
    """A named polygon: one outer ring plus optional hole rings.

    Rings are stored closed (first vertex repeated at the end).
    """

    name: str
    rings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.rings:
            raise InputError(f"region {self.name!r} has no rings")
        object.__setattr__(
            self, "rings", tuple(_normalize_ring(r) for r in self.rings)
        )


def haversine_km(a: GeoCoord, b: GeoCoord) -> float:
    """Great-circle distance between two coordinates in km.

    Exactly symmetric in its arguments and zero for identical inputs.
    """
    rlat1 = a.lat * _DEG
    rlat2 = b.lat * _DEG
    sdlat = math.sin(0.5 * (rlat2 - rlat1))
    sdlon = math.sin(0.5 * (b.lon - a.lon) * _DEG)
    h = sdlat * sdlat + math.cos(rlat1) * math.cos(rlat2) * sdlon * sdlon
    h = min(1.0, max(0.0, h))
    return 2.0 * EARTH_RADIUS_KM * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))


def project(points, ref: GeoCoord) -> list[PlanarPoint]:
    """Equirectangular projection of coordinates about ``ref``.

    x = R * dlon * cos(ref.lat), y = R * dlat (angles in radians), so the
    reference itself maps to (0, 0).
    """
    points = list(points)
    if not points:
        raise InputError("project requires at least one point")
    scale_x = EARTH_RADIUS_KM * math.cos(ref.lat * _DEG)
    out = []
    for p in points:
        x = (p.lon - ref.lon) * _DEG * scale_x
        y = (p.lat - ref.lat) * _DEG * EARTH_RADIUS_KM
        out.append(PlanarPoint(x, y))
    return out


def unproject(point: PlanarPoint, ref: GeoCoord) -> GeoCoord:
    """Inverse of :func:`project` for the same reference coordinate."""
    cos_ref = math.cos(ref.lat * _DEG)
    if cos_ref == 0.0:
        raise InputError("cannot unproject about a pole")
    lat = ref.lat + point.y / (EARTH_RADIUS_KM * _DEG)
    lon = ref.lon + point.x / (EARTH_RADIUS_KM * cos_ref * _DEG)
    return GeoCoord(lat, lon)


def _on_segment(px, py, x1, y1, x2, y2):
    cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
    scale = max(abs(x2 - x1), abs(y2 - y1), 1.0)
    if abs(cross) > 1e-12 * scale:
        return False
    return (
        min(x1, x2) - 1e-12 <= px <= max(x1, x2) + 1e-12
        and min(y1, y2) - 1e-12 <= py <= max(y1, y2) + 1e-12
    )


def _ray_cast(px, py, rings):
    """Even-odd containment over closed coordinate rings; edges count inside."""
    inside = False
    for ring in rings:
        for i in range(len(ring) - 1):
            x1, y1 = ring[i]
            x2, y2 = ring[i + 1]
            if _on_segment(px, py, x1, y1, x2, y2):
                return True
            if (y1 > py) != (y2 > py):
                x_cross = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
                if px < x_cross:
                    inside = not inside
    return inside


def point_in_polygon(p: GeoCoord, poly: RegionPolygon) -> bool:
    """Even-odd ray-casting verdict in lon/lat space.

    Points exactly on any ring edge (outer or hole) count as inside.
    """
    rings = [[(v.lon, v.lat) for v in ring] for ring in poly.rings]
    return _ray_cast(p.lon, p.lat, rings)


def pairwise_distances(points) -> np.ndarray:
    """Symmetric matrix of great-circle distances (km) with zero diagonal."""
    points = list(points)
    if not points:
        raise InputError("pairwise_distances requires at least one point")
    lat = np.array([p.lat for p in points], dtype=np.float64)
    lon = np.array([p.lon for p in points], dtype=np.float64)
    return haversine_matrix(lat, lon)
