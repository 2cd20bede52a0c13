"""Spatial clustering against a brute-force oracle."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wifiscout.clustering import (
    Cluster,
    cluster_aps,
    clusters_for_viewport,
    haversine_m,
    viewport_radius_m,
)
from wifiscout.errors import InvalidBbox, ValidationFailed
from wifiscout.model import BBox, GeoPoint

from helpers import make_ap
from oracles import brute_force_partition, reference_distance_m


def _aps_at(points):
    return [
        make_ap(ap_id=f"aa:bb:cc:00:{i // 256:02x}:{i % 256:02x}", lat=lat, lon=lon)
        for i, (lat, lon) in enumerate(points)
    ]


def _partition(clusters: list[Cluster]) -> set[frozenset[str]]:
    return {frozenset(c.member_ap_ids) for c in clusters}


# ---------------------------------------------------------------------------
# distance kernel
# ---------------------------------------------------------------------------


def test_distance_identity():
    p = GeoPoint(1.3521, 103.8198)
    assert haversine_m(p, p) == 0.0


def test_distance_city_block_anchor():
    d = haversine_m(GeoPoint(1.3521, 103.8198), GeoPoint(1.3521, 103.8298))
    assert abs(d - 1112) <= 1.0


def test_distance_half_circumference_anchor():
    d = haversine_m(GeoPoint(0, 0), GeoPoint(0, 180))
    assert abs(d - 20_015_087) <= 10.0


@given(
    lat1=st.floats(-89, 89), lon1=st.floats(-179.9, 180),
    lat2=st.floats(-89, 89), lon2=st.floats(-179.9, 180),
)
@settings(max_examples=200, deadline=None)
def test_distance_matches_atan2_reference(lat1, lon1, lat2, lon2):
    ours = haversine_m(GeoPoint(lat1, lon1), GeoPoint(lat2, lon2))
    ref = reference_distance_m(lat1, lon1, lat2, lon2)
    assert ours == pytest.approx(ref, abs=1e-6, rel=1e-9)
    assert ours == haversine_m(GeoPoint(lat2, lon2), GeoPoint(lat1, lon1))  # symmetric
    assert ours >= 0


# ---------------------------------------------------------------------------
# cluster_aps
# ---------------------------------------------------------------------------


def test_cluster_empty_input():
    assert cluster_aps([], 100.0) == []


def test_chain_is_transitive():
    # 0 m, 50 m, 100 m spacing along a meridian; radius 60 joins the chain
    step = 50 / 111_194.92664455873  # degrees latitude per 50 m on this sphere
    aps = _aps_at([(0.0, 0.0), (step, 0.0), (2 * step, 0.0)])
    clusters = cluster_aps(aps, 60.0)
    assert len(clusters) == 1
    assert clusters[0].size == 3


def test_distant_points_stay_apart():
    step = 500 / 111_194.92664455873
    aps = _aps_at([(0.0, 0.0), (step, 0.0)])
    clusters = cluster_aps(aps, 100.0)
    assert len(clusters) == 2
    assert all(c.size == 1 for c in clusters)


def test_cluster_id_is_smallest_member():
    aps = _aps_at([(0.0, 0.0), (0.0001, 0.0), (0.0002, 0.0)])
    clusters = cluster_aps(aps, 1000.0)
    assert clusters[0].cluster_id == min(ap.ap_id for ap in aps)


def test_bad_radius_rejected():
    with pytest.raises(ValueError):
        cluster_aps([], 0.0)
    with pytest.raises(ValueError):
        cluster_aps([], -5.0)


def test_partition_property():
    rng = random.Random(7)
    aps = _aps_at([(rng.uniform(1.2, 1.3), rng.uniform(103.7, 103.8)) for _ in range(60)])
    clusters = cluster_aps(aps, 400.0)
    seen: list[str] = []
    for c in clusters:
        seen.extend(c.member_ap_ids)
    assert sorted(seen) == sorted(ap.ap_id for ap in aps)
    assert sum(c.size for c in clusters) == len(aps)


def test_radius_monotonicity():
    rng = random.Random(11)
    aps = _aps_at([(rng.uniform(1.2, 1.25), rng.uniform(103.7, 103.75)) for _ in range(50)])
    counts = [len(cluster_aps(aps, r)) for r in (20, 50, 120, 300, 800, 2500)]
    assert counts == sorted(counts, reverse=True)


def test_permutation_invariance():
    rng = random.Random(13)
    aps = _aps_at([(rng.uniform(1.2, 1.3), rng.uniform(103.7, 103.8)) for _ in range(40)])
    base = cluster_aps(aps, 500.0)
    for _ in range(5):
        rng.shuffle(aps)
        again = cluster_aps(aps, 500.0)
        assert again == base  # ids, centroids, members, order: all of it


def test_centroid_inside_member_bbox():
    rng = random.Random(17)
    aps = _aps_at([(rng.uniform(1.2, 1.3), rng.uniform(103.7, 103.8)) for _ in range(30)])
    for c in cluster_aps(aps, 2000.0):
        members = [ap for ap in aps if ap.ap_id in c.member_ap_ids]
        lats = [ap.location.lat for ap in members]
        lons = [ap.location.lon for ap in members]
        assert min(lats) <= c.centroid.lat <= max(lats)
        assert min(lons) <= c.centroid.lon <= max(lons)


@given(seed=st.integers(0, 100_000))
@settings(max_examples=30, deadline=None)
def test_oracle_equivalence_random(seed):
    rng = random.Random(seed)
    n = rng.randint(0, 120)
    pts = [(rng.uniform(1.2, 1.4), rng.uniform(103.6, 103.8)) for _ in range(n)]
    radius = rng.uniform(10, 8000)
    aps = _aps_at(pts)
    ours = _partition(cluster_aps(aps, radius))
    theirs = brute_force_partition([(ap.ap_id, ap.location.lat, ap.location.lon) for ap in aps], radius)
    assert ours == theirs


def test_oracle_equivalence_near_pole_and_antimeridian():
    # the grid must not split neighbors that straddle lon wrap or sit at
    # extreme latitude
    pts = [
        (89.95, 10.0), (89.95, -170.0), (89.96, 100.0),
        (0.0, 179.999), (0.0, -179.999), (0.0005, 180.0),
        (-89.99, 0.0), (-89.99, 90.0),
    ]
    aps = _aps_at(pts)
    for radius in (50.0, 500.0, 5000.0, 50_000.0, 500_000.0):
        ours = _partition(cluster_aps(aps, radius))
        theirs = brute_force_partition(
            [(ap.ap_id, ap.location.lat, ap.location.lon) for ap in aps], radius
        )
        assert ours == theirs, f"radius={radius}"


def test_huge_radius_single_cluster():
    pts = [(80.0, 0.0), (-80.0, 180.0), (0.0, 90.0)]
    clusters = cluster_aps(_aps_at(pts), 25_000_000.0)  # > half circumference
    assert len(clusters) == 1 and clusters[0].size == 3


# ---------------------------------------------------------------------------
# viewport clustering
# ---------------------------------------------------------------------------


def test_viewport_radius_formula():
    assert viewport_radius_m(16) == 76.2939453125
    assert viewport_radius_m(1) == 2_500_000.0
    for zoom in range(1, 20):
        assert viewport_radius_m(zoom) == 2 * viewport_radius_m(zoom + 1)


def test_viewport_empty_bbox():
    aps = _aps_at([(1.3, 103.8)])
    assert clusters_for_viewport(aps, BBox(40.0, -80.0, 41.0, -79.0), 10) == []


def test_viewport_single_ap():
    aps = _aps_at([(1.3, 103.8)])
    clusters = clusters_for_viewport(aps, BBox(1.0, 103.0, 2.0, 104.0), 16)
    assert len(clusters) == 1 and clusters[0].size == 1


def test_viewport_filters_then_clusters():
    rng = random.Random(23)
    inside = [(rng.uniform(1.2, 1.3), rng.uniform(103.7, 103.8)) for _ in range(20)]
    outside = [(50.0 + rng.random(), 8.0 + rng.random()) for _ in range(5)]
    aps = _aps_at(inside + outside)
    bbox = BBox(1.0, 103.0, 2.0, 104.0)
    clusters = clusters_for_viewport(aps, bbox, 16)
    visible = {ap.ap_id for ap in aps if bbox.contains(ap.location)}
    assert set().union(*(c.member_ap_ids for c in clusters)) == visible
    expected = _partition(
        cluster_aps([ap for ap in aps if ap.ap_id in visible], viewport_radius_m(16))
    )
    assert _partition(clusters) == expected


def test_viewport_ten_ap_fixture_matches_oracle_at_zoom_16():
    # fixed fixture: two tight groups (~30 m spacing) and two loners
    base = (1.3000, 103.8000)
    off = 30 / 111_194.92664455873
    pts = [
        base,
        (base[0] + off, base[1]),
        (base[0], base[1] + off),
        (base[0] + off, base[1] + off),
        (1.3100, 103.8100),
        (1.3100 + off, 103.8100),
        (1.3100 + 2 * off, 103.8100),
        (1.3200, 103.8200),
        (1.3300, 103.8300),
        (1.3300, 103.8300 + 40 * off),
    ]
    aps = _aps_at(pts)
    clusters = clusters_for_viewport(aps, BBox(1.29, 103.79, 1.34, 103.87), 16)
    theirs = brute_force_partition(
        [(ap.ap_id, ap.location.lat, ap.location.lon) for ap in aps], viewport_radius_m(16)
    )
    assert _partition(clusters) == theirs
    assert sorted(c.size for c in clusters) == [1, 1, 1, 3, 4]


def test_viewport_zoom_range_enforced():
    aps = _aps_at([(1.3, 103.8)])
    bbox = BBox(1.0, 103.0, 2.0, 104.0)
    for zoom in (0, 21, -3, 2.5, True):
        with pytest.raises(ValidationFailed):
            clusters_for_viewport(aps, bbox, zoom)


def test_viewport_invalid_bbox_rejected():
    with pytest.raises(InvalidBbox):
        clusters_for_viewport([], BBox(2.0, 103.0, 1.0, 104.0), 10)
