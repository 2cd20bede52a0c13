"""Spatial grouping of APs for map display.

Clusters are the connected components of the graph whose edges join APs
within a radius of each other (single-linkage threshold clustering).
Distances are great-circle on a sphere of radius 6,371,000 m.

The pairing step uses a grid over 3D chord space so it stays near-linear
for large inputs; every candidate pair is still verified with the exact
haversine distance, so results are identical to the brute-force O(n^2)
definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationFailed
from .model import AccessPoint, BBox, GeoPoint, validate_bbox

EARTH_RADIUS_M = 6_371_000.0

MIN_ZOOM = 1
MAX_ZOOM = 20


@dataclass(frozen=True)
class Cluster:
    """A group of spatially correlated APs with centroid and size."""

    cluster_id: str  # lexicographically smallest member ap_id
    centroid: GeoPoint  # arithmetic mean of member lat/lon
    member_ap_ids: frozenset[str]

    @property
    def size(self) -> int:
        return len(self.member_ap_ids)

    def to_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "centroid": {"lat": self.centroid.lat, "lon": self.centroid.lon},
            "member_ap_ids": sorted(self.member_ap_ids),
            "size": self.size,
        }


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters between two WGS84 points."""
    lat1 = math.radians(a.lat)
    lat2 = math.radians(b.lat)
    dlat = lat2 - lat1
    dlon = math.radians(b.lon - a.lon)
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def viewport_radius_m(zoom: int) -> float:
    """Clustering radius for a map zoom level; halves per level."""
    return 40_000_000.0 / 2 ** (zoom + 3)


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:  # path compression
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri


def _unit_xyz(p: GeoPoint) -> tuple[float, float, float]:
    lat = math.radians(p.lat)
    lon = math.radians(p.lon)
    return (math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat))


def cluster_aps(aps: list[AccessPoint], radius_m: float) -> list[Cluster]:
    """Partition APs into single-linkage clusters at the given radius.

    Deterministic and invariant under input permutation. Output sorted
    by cluster_id.
    """
    if radius_m <= 0:
        raise ValueError(f"radius_m must be positive: {radius_m!r}")
    if not aps:
        return []

    # Work in a fixed order so float summation in centroids is stable.
    ordered = sorted(aps, key=lambda ap: ap.ap_id)

    # Arc distance d corresponds to 3D chord 2*R*sin(d / (2R)). Bucketing
    # by chord-sized cells makes the neighbor check local; the pole and
    # antimeridian need no special casing in chord space.
    half_angle = min(radius_m / (2.0 * EARTH_RADIUS_M), math.pi / 2.0)
    chord = 2.0 * EARTH_RADIUS_M * math.sin(half_angle)
    coords = [
        tuple(EARTH_RADIUS_M * c for c in _unit_xyz(ap.location)) for ap in ordered
    ]

    uf = _UnionFind(len(ordered))
    cells: dict[tuple[int, int, int], list[int]] = {}
    for i, (x, y, z) in enumerate(coords):
        cell = (int(math.floor(x / chord)), int(math.floor(y / chord)), int(math.floor(z / chord)))
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for dz in (-1, 0, 1):
                    for j in cells.get((cell[0] + dx, cell[1] + dy, cell[2] + dz), ()):
                        if haversine_m(ordered[i].location, ordered[j].location) <= radius_m:
                            uf.union(i, j)
        cells.setdefault(cell, []).append(i)

    groups: dict[int, list[int]] = {}
    for i in range(len(ordered)):
        groups.setdefault(uf.find(i), []).append(i)

    clusters = []
    for members in groups.values():
        members.sort()  # ap_id order, since `ordered` is ap_id-sorted
        lat_sum = sum(ordered[i].location.lat for i in members)
        lon_sum = sum(ordered[i].location.lon for i in members)
        n = len(members)
        clusters.append(
            Cluster(
                cluster_id=ordered[members[0]].ap_id,
                centroid=GeoPoint(lat_sum / n, lon_sum / n),
                member_ap_ids=frozenset(ordered[i].ap_id for i in members),
            )
        )
    clusters.sort(key=lambda c: c.cluster_id)
    return clusters


def clusters_for_viewport(aps: list[AccessPoint], bbox: BBox, zoom: int) -> list[Cluster]:
    """Cluster the APs visible in a map viewport at a zoom level."""
    validate_bbox(bbox)
    if not isinstance(zoom, int) or isinstance(zoom, bool) or not (MIN_ZOOM <= zoom <= MAX_ZOOM):
        raise ValidationFailed([f"zoom must be an integer in [{MIN_ZOOM}, {MAX_ZOOM}]: {zoom!r}"])
    visible = [ap for ap in aps if bbox.contains(ap.location)]
    if not visible:
        return []
    return cluster_aps(visible, viewport_radius_m(zoom))
