"""Canonical domain types, identifiers, and validation.

All types are immutable value objects. Construction does not validate;
the ``validate_*`` helpers return a list of violated invariants so a
caller can report every problem at once, and ``validate_review`` raises
``ValidationFailed`` carrying the full list.

Timestamps are UTC integer seconds everywhere.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .errors import InvalidBbox, MalformedBssid, ValidationFailed

_HEX_DIGITS = set(string.hexdigits)

MAX_COMMENT_LEN = 1000
RSSI_MIN_DBM = -120
RSSI_MAX_DBM = 0


class ApSource(str, Enum):
    CROWDSENSED = "crowdsensed"
    EXTERNAL = "external"


@dataclass(frozen=True)
class GeoPoint:
    """WGS84 coordinate in decimal degrees."""

    lat: float
    lon: float


@dataclass(frozen=True)
class BBox:
    """Inclusive lat/lon bounds. Wire form: ``min_lat,min_lon,max_lat,max_lon``."""

    min_lat: float
    min_lon: float
    max_lat: float
    max_lon: float

    def contains(self, p: GeoPoint) -> bool:
        return (
            self.min_lat <= p.lat <= self.max_lat
            and self.min_lon <= p.lon <= self.max_lon
        )

    def as_wire(self) -> str:
        return ",".join(
            repr(float(v)) for v in (self.min_lat, self.min_lon, self.max_lat, self.max_lon)
        )


@dataclass(frozen=True)
class PlaceTag:
    """Human-meaningful location of an AP: street address, floor, room."""

    street_address: str
    floor: str | None = None
    room: str | None = None


@dataclass(frozen=True)
class NetMetrics:
    """Client-reported connectivity measurements for one review."""

    rssi_dbm: int
    link_speed_mbps: float
    upload_mbps: float
    download_mbps: float


@dataclass(frozen=True)
class AccessPoint:
    """A WiFi hotspot identity with geolocation and semantic place."""

    ap_id: str
    bssid: str | None
    ssid: str
    location: GeoPoint
    place: PlaceTag | None
    source: ApSource


@dataclass(frozen=True)
class UserAccount:
    user_id: str
    display_name: str
    avatar_ref: str | None
    registered_at: int


@dataclass(frozen=True)
class Review:
    """One user's experience report for one AP at one timestamp.

    ``(user_id, ap_id, at)`` must be unique platform-wide; that cross-record
    invariant is enforced by the store, not here.
    """

    review_id: str
    user_id: str
    ap_id: str
    at: int
    rating: int
    comment: str | None = None
    metrics: NetMetrics | None = None
    place: PlaceTag | None = None


def canonicalize_bssid(raw: str) -> str:
    """Normalize a BSSID to lowercase colon-separated form.

    Accepts 12 hex digits with optional ':' or '-' separators, any case.
    Raises MalformedBssid otherwise. Idempotent on accepted input.
    """
    if not isinstance(raw, str):
        raise MalformedBssid(f"BSSID must be a string, got {type(raw).__name__}")
    digits = raw.replace(":", "").replace("-", "")
    if len(digits) != 12 or any(c not in _HEX_DIGITS for c in digits):
        raise MalformedBssid(f"not a 6-octet hex BSSID: {raw!r}")
    digits = digits.lower()
    return ":".join(digits[i : i + 2] for i in range(0, 12, 2))


def is_canonical_bssid(value: str) -> bool:
    try:
        return canonicalize_bssid(value) == value
    except MalformedBssid:
        return False


def _is_int(value: Any) -> bool:
    # bool is an int subclass; never accept it as a number
    return isinstance(value, int) and not isinstance(value, bool)


def _is_num(value: Any) -> bool:
    return (_is_int(value) or isinstance(value, float)) and math.isfinite(value)


def validate_geopoint(p: Any, field: str = "location") -> list[str]:
    out: list[str] = []
    if not isinstance(p, GeoPoint):
        return [f"{field} must be a GeoPoint"]
    if not _is_num(p.lat) or not (-90.0 <= p.lat <= 90.0):
        out.append(f"{field}.lat out of range [-90, 90]: {p.lat!r}")
    if not _is_num(p.lon) or not (-180.0 < p.lon <= 180.0):
        out.append(f"{field}.lon out of range (-180, 180]: {p.lon!r}")
    return out


def validate_place(place: Any, field: str = "place") -> list[str]:
    if place is None:
        return []
    if not isinstance(place, PlaceTag):
        return [f"{field} must be a PlaceTag"]
    out: list[str] = []
    if not isinstance(place.street_address, str) or not place.street_address:
        out.append(f"{field}.street_address must be non-empty when the tag is present")
    return out


def validate_metrics(metrics: Any, field: str = "metrics") -> list[str]:
    if metrics is None:
        return []
    if not isinstance(metrics, NetMetrics):
        return [f"{field} must be NetMetrics"]
    out: list[str] = []
    if not _is_int(metrics.rssi_dbm) or not (RSSI_MIN_DBM <= metrics.rssi_dbm <= RSSI_MAX_DBM):
        out.append(
            f"{field}.rssi_dbm out of range [{RSSI_MIN_DBM}, {RSSI_MAX_DBM}]: {metrics.rssi_dbm!r}"
        )
    for name in ("link_speed_mbps", "upload_mbps", "download_mbps"):
        v = getattr(metrics, name)
        if not _is_num(v) or v < 0:
            out.append(f"{field}.{name} must be a non-negative number: {v!r}")
    return out


def validate_access_point(ap: AccessPoint) -> list[str]:
    out: list[str] = []
    if not isinstance(ap.ap_id, str) or not ap.ap_id:
        out.append("ap_id must be a non-empty string")
    if ap.bssid is not None:
        if not is_canonical_bssid(ap.bssid):
            out.append(f"bssid not in canonical form: {ap.bssid!r}")
        elif ap.ap_id != ap.bssid:
            out.append("ap_id must equal the canonical bssid when bssid is present")
    elif isinstance(ap.ap_id, str) and not ap.ap_id.startswith("ext:"):
        out.append("ap_id must carry the 'ext:' prefix when bssid is absent")
    if not isinstance(ap.ssid, str) or not ap.ssid:
        out.append("ssid must be non-empty")
    out.extend(validate_geopoint(ap.location))
    out.extend(validate_place(ap.place))
    if not isinstance(ap.source, ApSource):
        out.append(f"source must be an ApSource: {ap.source!r}")
    return out


def validate_user(user: UserAccount) -> list[str]:
    out: list[str] = []
    if not isinstance(user.user_id, str) or not user.user_id:
        out.append("user_id must be a non-empty string")
    if not isinstance(user.display_name, str) or not user.display_name:
        out.append("display_name must be non-empty")
    if user.avatar_ref is not None and not isinstance(user.avatar_ref, str):
        out.append("avatar_ref must be a string when present")
    if not _is_int(user.registered_at) or user.registered_at < 0:
        out.append(f"registered_at must be a non-negative integer timestamp: {user.registered_at!r}")
    return out


def review_violations(review: Review) -> list[str]:
    """Full list of violated invariants for a candidate review."""
    out: list[str] = []
    if not isinstance(review.review_id, str) or not review.review_id:
        out.append("review_id must be a non-empty string")
    if not isinstance(review.user_id, str) or not review.user_id:
        out.append("user_id must be a non-empty string")
    if not isinstance(review.ap_id, str) or not review.ap_id:
        out.append("ap_id must be a non-empty string")
    if not _is_int(review.at) or review.at <= 0:
        out.append(f"at must be a strictly positive integer timestamp: {review.at!r}")
    if not _is_int(review.rating) or not (1 <= review.rating <= 5):
        out.append(f"rating must be an integer in [1, 5]: {review.rating!r}")
    if review.comment is not None:
        if not isinstance(review.comment, str):
            out.append("comment must be a string when present")
        elif len(review.comment) > MAX_COMMENT_LEN:
            out.append(f"comment exceeds {MAX_COMMENT_LEN} characters")
    out.extend(validate_metrics(review.metrics))
    out.extend(validate_place(review.place))
    return out


def validate_review(review: Review) -> Review:
    """Return the review unchanged if every invariant holds.

    Raises ValidationFailed carrying one entry per violated invariant.
    """
    violations = review_violations(review)
    if violations:
        raise ValidationFailed(violations)
    return review


def parse_bbox(raw: str) -> BBox:
    """Parse the ``min_lat,min_lon,max_lat,max_lon`` wire form."""
    parts = raw.split(",")
    if len(parts) != 4:
        raise InvalidBbox(f"bbox must have 4 comma-separated numbers: {raw!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise InvalidBbox(f"bbox has non-numeric bounds: {raw!r}") from None
    return validate_bbox(BBox(*values))


def validate_bbox(bbox: BBox) -> BBox:
    for corner in (
        GeoPoint(bbox.min_lat, bbox.min_lon),
        GeoPoint(bbox.max_lat, bbox.max_lon),
    ):
        problems = validate_geopoint(corner, field="bbox")
        if problems:
            raise InvalidBbox("; ".join(problems))
    if bbox.min_lat > bbox.max_lat or bbox.min_lon > bbox.max_lon:
        raise InvalidBbox("bbox min bound exceeds max bound")
    return bbox


# ---------------------------------------------------------------------------
# Wire serialization (event log records and API payloads)
# ---------------------------------------------------------------------------


def geopoint_to_dict(p: GeoPoint) -> dict:
    return {"lat": p.lat, "lon": p.lon}


def place_to_dict(place: PlaceTag | None) -> dict | None:
    if place is None:
        return None
    return {"street_address": place.street_address, "floor": place.floor, "room": place.room}


def metrics_to_dict(metrics: NetMetrics | None) -> dict | None:
    if metrics is None:
        return None
    return {
        "rssi_dbm": metrics.rssi_dbm,
        "link_speed_mbps": metrics.link_speed_mbps,
        "upload_mbps": metrics.upload_mbps,
        "download_mbps": metrics.download_mbps,
    }


def ap_to_dict(ap: AccessPoint) -> dict:
    return {
        "ap_id": ap.ap_id,
        "bssid": ap.bssid,
        "ssid": ap.ssid,
        "location": geopoint_to_dict(ap.location),
        "place": place_to_dict(ap.place),
        "source": ap.source.value,
    }


def user_to_dict(user: UserAccount) -> dict:
    return {
        "user_id": user.user_id,
        "display_name": user.display_name,
        "avatar_ref": user.avatar_ref,
        "registered_at": user.registered_at,
    }


def review_to_dict(review: Review) -> dict:
    return {
        "review_id": review.review_id,
        "user_id": review.user_id,
        "ap_id": review.ap_id,
        "at": review.at,
        "rating": review.rating,
        "comment": review.comment,
        "metrics": metrics_to_dict(review.metrics),
        "place": review.place and place_to_dict(review.place),
    }


def _place_from_dict(d: dict | None) -> PlaceTag | None:
    if d is None:
        return None
    return PlaceTag(
        street_address=d["street_address"],
        floor=d.get("floor"),
        room=d.get("room"),
    )


def _metrics_from_dict(d: dict | None) -> NetMetrics | None:
    if d is None:
        return None
    return NetMetrics(
        rssi_dbm=d["rssi_dbm"],
        link_speed_mbps=d["link_speed_mbps"],
        upload_mbps=d["upload_mbps"],
        download_mbps=d["download_mbps"],
    )


def ap_from_dict(d: dict) -> AccessPoint:
    return AccessPoint(
        ap_id=d["ap_id"],
        bssid=d.get("bssid"),
        ssid=d["ssid"],
        location=GeoPoint(lat=d["location"]["lat"], lon=d["location"]["lon"]),
        place=_place_from_dict(d.get("place")),
        source=ApSource(d["source"]),
    )


def user_from_dict(d: dict) -> UserAccount:
    return UserAccount(
        user_id=d["user_id"],
        display_name=d["display_name"],
        avatar_ref=d.get("avatar_ref"),
        registered_at=d["registered_at"],
    )


def review_from_dict(d: dict) -> Review:
    return Review(
        review_id=d["review_id"],
        user_id=d["user_id"],
        ap_id=d["ap_id"],
        at=d["at"],
        rating=d["rating"],
        comment=d.get("comment"),
        metrics=_metrics_from_dict(d.get("metrics")),
        place=_place_from_dict(d.get("place")),
    )
