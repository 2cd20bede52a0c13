"""Offline-search snapshot codec.

A snapshot is a newline-delimited UTF-8 file. Line 1 is the header

    wifiscout-snapshot v1 <generated_at> <bbox|all>

followed by one tab-separated record per AP with fields in fixed order:

    ap_id, ssid, lat, lon, street_address, floor, room, review_count,
    mean_rating, rssi_dbm, link_speed_mbps, upload_mbps, download_mbps,
    latest_review_at, owner_user_id

Absent optionals are empty strings. Numbers use their shortest
round-trip decimal form. Entries are strictly ascending by ap_id and
the file always ends with a newline. Encoding is byte-deterministic:
identical state yields identical bytes.

String fields may contain tabs or newlines; those and backslashes are
escaped as \\\\, \\t, \\n, \\r.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedSnapshot, UnsupportedVersion
from .model import (
    AccessPoint,
    ApSource,
    BBox,
    GeoPoint,
    NetMetrics,
    PlaceTag,
    ap_to_dict,
    metrics_to_dict,
)

FORMAT_VERSION = 1
_MAGIC = "wifiscout-snapshot"
_N_FIELDS = 15


@dataclass(frozen=True)
class ApSummary:
    """One AP's aggregated quality view: ratings, metrics, ownership."""

    ap: AccessPoint
    review_count: int
    mean_rating: float | None  # present iff review_count > 0
    latest_metrics: NetMetrics | None
    latest_review_at: int | None
    owner_user_id: str | None

    def to_dict(self) -> dict:
        return {
            "ap": ap_to_dict(self.ap),
            "review_count": self.review_count,
            "mean_rating": self.mean_rating,
            "latest_metrics": metrics_to_dict(self.latest_metrics),
            "latest_review_at": self.latest_review_at,
            "owner_user_id": self.owner_user_id,
        }


@dataclass(frozen=True)
class Snapshot:
    """Exportable offline replica of AP summaries for region search."""

    format_version: int
    generated_at: int
    bbox: BBox | None
    entries: tuple[ApSummary, ...]  # strictly ascending by ap_id


def query_entries(
    entries: tuple[ApSummary, ...] | list[ApSummary],
    bbox: BBox,
    min_rating: float | None = None,
) -> list[ApSummary]:
    """Region search over AP summaries, shared by live and offline paths.

    Returns summaries inside the bbox, filtered to mean_rating >=
    min_rating when given (unrated APs never pass a rating filter),
    sorted descending by mean_rating with unrated last, ties by ap_id.
    """
    hits = [s for s in entries if bbox.contains(s.ap.location)]
    if min_rating is not None:
        hits = [s for s in hits if s.mean_rating is not None and s.mean_rating >= min_rating]
    hits.sort(
        key=lambda s: (s.mean_rating is None, -(s.mean_rating or 0.0), s.ap.ap_id)
    )
    return hits


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------


def _escape(s: str) -> str:
    return (
        s.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")
    )


def _unescape(s: str, offset: int) -> str:
    if "\\" not in s:
        return s
    out: list[str] = []
    i = 0
    while i < len(s):
        c = s[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        if i + 1 >= len(s):
            raise MalformedSnapshot("dangling backslash in string field", offset=offset)
        nxt = s[i + 1]
        try:
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}[nxt])
        except KeyError:
            raise MalformedSnapshot(f"bad escape \\{nxt} in string field", offset=offset) from None
        i += 2
    return "".join(out)


def _num(value: int | float | None) -> str:
    if value is None:
        return ""
    return repr(value)  # shortest round-trip form for both int and float


def _opt(value: str | None) -> str:
    return "" if value is None else _escape(value)


def encode_entry(s: ApSummary) -> str:
    place = s.ap.place
    metrics = s.latest_metrics
    fields = [
        _escape(s.ap.ap_id),
        _escape(s.ap.ssid),
        _num(s.ap.location.lat),
        _num(s.ap.location.lon),
        _opt(place.street_address if place else None),
        _opt(place.floor if place else None),
        _opt(place.room if place else None),
        _num(s.review_count),
        _num(s.mean_rating),
        _num(metrics.rssi_dbm if metrics else None),
        _num(metrics.link_speed_mbps if metrics else None),
        _num(metrics.upload_mbps if metrics else None),
        _num(metrics.download_mbps if metrics else None),
        _num(s.latest_review_at),
        _opt(s.owner_user_id),
    ]
    return "\t".join(fields)


def encode_snapshot(snapshot: Snapshot) -> bytes:
    bbox = snapshot.bbox.as_wire() if snapshot.bbox is not None else "all"
    lines = [f"{_MAGIC} v{snapshot.format_version} {snapshot.generated_at} {bbox}"]
    lines.extend(encode_entry(s) for s in snapshot.entries)
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------


def _parse_num(token: str, offset: int, field: str, want_int: bool = False) -> int | float | None:
    if token == "":
        return None
    try:
        if want_int:
            return int(token)
        # int-shaped tokens stay ints so re-encoding is byte-identical
        if all(c in "-0123456789" for c in token):
            return int(token)
        return float(token)
    except ValueError:
        raise MalformedSnapshot(f"bad number in {field}: {token!r}", offset=offset) from None


def _parse_entry(line: str, offset: int) -> ApSummary:
    raw = line.split("\t")
    if len(raw) != _N_FIELDS:
        raise MalformedSnapshot(
            f"expected {_N_FIELDS} tab-separated fields, got {len(raw)}", offset=offset
        )

    ap_id = _unescape(raw[0], offset)
    ssid = _unescape(raw[1], offset)
    if not ap_id or not ssid:
        raise MalformedSnapshot("ap_id and ssid must be non-empty", offset=offset)
    lat = _parse_num(raw[2], offset, "lat")
    lon = _parse_num(raw[3], offset, "lon")
    if lat is None or lon is None:
        raise MalformedSnapshot("lat/lon must be present", offset=offset)

    street = _unescape(raw[4], offset)
    floor = _unescape(raw[5], offset)
    room = _unescape(raw[6], offset)
    if street:
        place = PlaceTag(street_address=street, floor=floor or None, room=room or None)
    elif floor or room:
        raise MalformedSnapshot("floor/room present without street_address", offset=offset)
    else:
        place = None

    review_count = _parse_num(raw[7], offset, "review_count", want_int=True)
    if review_count is None or review_count < 0:
        raise MalformedSnapshot(f"bad review_count: {raw[7]!r}", offset=offset)
    mean_rating = _parse_num(raw[8], offset, "mean_rating")
    if (mean_rating is None) != (review_count == 0):
        raise MalformedSnapshot(
            "mean_rating must be present exactly when review_count > 0", offset=offset
        )

    metric_tokens = raw[9:13]
    if all(t == "" for t in metric_tokens):
        metrics = None
    elif all(t != "" for t in metric_tokens):
        metrics = NetMetrics(
            rssi_dbm=_parse_num(raw[9], offset, "rssi_dbm", want_int=True),
            link_speed_mbps=_parse_num(raw[10], offset, "link_speed_mbps"),
            upload_mbps=_parse_num(raw[11], offset, "upload_mbps"),
            download_mbps=_parse_num(raw[12], offset, "download_mbps"),
        )
    else:
        raise MalformedSnapshot("metrics fields must be all present or all absent", offset=offset)

    latest_review_at = _parse_num(raw[13], offset, "latest_review_at", want_int=True)
    owner = _unescape(raw[14], offset) or None

    # bssid and source are recoverable from the id shape
    if ap_id.startswith("ext:"):
        bssid, source = None, ApSource.EXTERNAL
    else:
        bssid, source = ap_id, ApSource.CROWDSENSED
    ap = AccessPoint(
        ap_id=ap_id,
        bssid=bssid,
        ssid=ssid,
        location=GeoPoint(lat, lon),
        place=place,
        source=source,
    )
    return ApSummary(
        ap=ap,
        review_count=review_count,
        mean_rating=mean_rating,
        latest_metrics=metrics,
        latest_review_at=latest_review_at,
        owner_user_id=owner,
    )


def _parse_header(line: str) -> tuple[int, BBox | None]:
    parts = line.split(" ")
    if len(parts) != 4 or parts[0] != _MAGIC:
        raise MalformedSnapshot(f"bad snapshot header: {line!r}", offset=0)
    version_token, generated_token, bbox_token = parts[1], parts[2], parts[3]
    if not (len(version_token) > 1 and version_token[0] == "v" and version_token[1:].isdigit()):
        raise MalformedSnapshot(f"bad version token: {version_token!r}", offset=0)
    version = int(version_token[1:])
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"snapshot format v{version} not supported (want v{FORMAT_VERSION})")
    try:
        generated_at = int(generated_token)
    except ValueError:
        raise MalformedSnapshot(f"bad generated_at: {generated_token!r}", offset=0) from None
    if bbox_token == "all":
        return generated_at, None
    nums = bbox_token.split(",")
    if len(nums) != 4:
        raise MalformedSnapshot(f"bad bbox token: {bbox_token!r}", offset=0)
    try:
        bounds = [float(n) for n in nums]
    except ValueError:
        raise MalformedSnapshot(f"bad bbox token: {bbox_token!r}", offset=0) from None
    return generated_at, BBox(*bounds)


def import_snapshot(data: bytes) -> Snapshot:
    """Parse snapshot bytes, verifying structure and entry ordering.

    Raises UnsupportedVersion for a different format version and
    MalformedSnapshot (with the byte offset of the offending line)
    for everything else.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedSnapshot(f"not valid UTF-8: {exc.reason}", offset=exc.start) from None
    if not text.endswith("\n"):
        raise MalformedSnapshot("truncated file: missing final newline", offset=len(data))

    lines = text[:-1].split("\n")
    generated_at, bbox = _parse_header(lines[0])

    entries: list[ApSummary] = []
    offset = len(lines[0].encode("utf-8")) + 1
    prev_id: str | None = None
    for line in lines[1:]:
        entry = _parse_entry(line, offset)
        if prev_id is not None and entry.ap.ap_id <= prev_id:
            raise MalformedSnapshot(
                f"entries not strictly ascending by ap_id at {entry.ap.ap_id!r}", offset=offset
            )
        prev_id = entry.ap.ap_id
        entries.append(entry)
        offset += len(line.encode("utf-8")) + 1

    return Snapshot(
        format_version=FORMAT_VERSION,
        generated_at=generated_at,
        bbox=bbox,
        entries=tuple(entries),
    )
