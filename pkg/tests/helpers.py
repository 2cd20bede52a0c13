"""Compact builders shared by the test modules."""

from __future__ import annotations

from wifiscout.model import (
    AccessPoint,
    ApSource,
    GeoPoint,
    NetMetrics,
    PlaceTag,
    Review,
)

T0 = 1_700_000_000


def make_ap(
    ap_id: str = "aa:bb:cc:00:11:22",
    lat: float = 1.3521,
    lon: float = 103.8198,
    ssid: str = "test-net",
    street: str | None = "1 Test St",
    source: ApSource = ApSource.CROWDSENSED,
) -> AccessPoint:
    return AccessPoint(
        ap_id=ap_id,
        bssid=None if ap_id.startswith("ext:") else ap_id,
        ssid=ssid,
        location=GeoPoint(lat, lon),
        place=PlaceTag(street_address=street) if street else None,
        source=ApSource.EXTERNAL if ap_id.startswith("ext:") else source,
    )


def make_review(
    user_id: str = "u1",
    ap_id: str = "aa:bb:cc:00:11:22",
    at: int = T0,
    rating: int = 4,
    review_id: str | None = None,
    comment: str | None = None,
    metrics: NetMetrics | None = None,
    place: PlaceTag | None = None,
) -> Review:
    return Review(
        review_id=review_id or f"rv-{user_id}-{ap_id}-{at}",
        user_id=user_id,
        ap_id=ap_id,
        at=at,
        rating=rating,
        comment=comment,
        metrics=metrics,
        place=place,
    )


def make_metrics(
    rssi: int = -55,
    link: float = 120.0,
    up: float = 15.5,
    down: float = 88.2,
) -> NetMetrics:
    return NetMetrics(rssi_dbm=rssi, link_speed_mbps=link, upload_mbps=up, download_mbps=down)
