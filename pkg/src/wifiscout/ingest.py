"""External dataset import and the review submission pipeline.

The external hotspot registry arrives as UTF-8 CSV with the exact
header ``ssid,lat,lon,street_address,floor,room,operator``. Rows
become external-source APs with a stable synthetic id:

    ap_id = "ext:" + FNV-1a 64 digest (16 hex chars) of "ssid|lat|lon"

where lat/lon are the parsed floats in shortest round-trip form, so the
id is identical across runs and platforms. Import is idempotent; rows
identical to stored state are skipped without appending events.

Row-level problems are reported per line and never abort the batch; a
wrong header aborts with MalformedHeader.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import MalformedHeader
from .model import (
    AccessPoint,
    ApSource,
    GeoPoint,
    PlaceTag,
    Review,
    validate_geopoint,
)
from .rewards import RewardEvent
from .store import AdvisoryStore

CSV_HEADER = "ssid,lat,lon,street_address,floor,room,operator"
_N_COLS = 7

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


@dataclass(frozen=True)
class ExternalHotspotRow:
    ssid: str
    lat: float
    lon: float
    street_address: str
    floor: str | None = None
    room: str | None = None
    operator: str | None = None


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash; tiny, stable, and published everywhere."""
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def external_ap_id(ssid: str, lat: float, lon: float) -> str:
    """Stable synthetic id for an external row without a BSSID."""
    key = f"{ssid}|{lat!r}|{lon!r}"
    return f"ext:{fnv1a64(key.encode('utf-8')):016x}"


def row_to_ap(row: ExternalHotspotRow) -> AccessPoint:
    return AccessPoint(
        ap_id=external_ap_id(row.ssid, row.lat, row.lon),
        bssid=None,
        ssid=row.ssid,
        location=GeoPoint(row.lat, row.lon),
        place=PlaceTag(street_address=row.street_address, floor=row.floor, room=row.room),
        source=ApSource.EXTERNAL,
    )


def _parse_row(fields: list[str]) -> ExternalHotspotRow:
    """Raises ValueError with a human reason for any bad row."""
    if len(fields) != _N_COLS:
        raise ValueError(f"expected {_N_COLS} fields, got {len(fields)}")
    ssid, lat_s, lon_s, street, floor, room, operator = fields
    if not ssid:
        raise ValueError("ssid must be non-empty")
    if not street:
        raise ValueError("street_address must be non-empty")
    try:
        lat = float(lat_s)
    except ValueError:
        raise ValueError(f"lat is not a number: {lat_s!r}") from None
    try:
        lon = float(lon_s)
    except ValueError:
        raise ValueError(f"lon is not a number: {lon_s!r}") from None
    problems = validate_geopoint(GeoPoint(lat, lon), field="")
    if problems:
        # strip the leading "." the empty field prefix leaves behind
        raise ValueError("; ".join(p.lstrip(".") for p in problems))
    return ExternalHotspotRow(
        ssid=ssid,
        lat=lat,
        lon=lon,
        street_address=street,
        floor=floor or None,
        room=room or None,
        operator=operator or None,
    )


def import_external_csv(
    store: AdvisoryStore, data: bytes | str, at: int | None = None
) -> tuple[int, list[tuple[int, str]]]:
    """Upsert every valid CSV row; return (imported_count, errors).

    imported_count counts rows that changed state (new or updated APs);
    rows identical to stored state are valid but count as zero, which
    makes re-imports no-ops. errors holds (line_no, reason) pairs,
    line 1 being the header.

    Events are stamped with ``at`` (default: the current log head time,
    so an import never advances the clock on its own).
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedHeader(f"file is not valid UTF-8: {exc.reason}") from None
    else:
        text = data

    first_line, _, rest = text.partition("\n")
    if first_line.rstrip("\r") != CSV_HEADER:
        raise MalformedHeader(f"header must be exactly {CSV_HEADER!r}, got {first_line!r}")

    when = at if at is not None else store.head_at()
    imported = 0
    errors: list[tuple[int, str]] = []
    reader = csv.reader(io.StringIO(rest))
    with store.batched():
        for fields in reader:
            line_no = reader.line_num + 1  # header consumed before the reader
            if not fields:
                continue  # blank line
            try:
                row = _parse_row(fields)
            except ValueError as exc:
                errors.append((line_no, str(exc)))
                continue
            if store.upsert_ap(row_to_ap(row), at=when) != "unchanged":
                imported += 1
    return imported, errors


def submit_review(
    store: AdvisoryStore, review: Review, ap: AccessPoint | None = None
) -> RewardEvent:
    """validate -> reward -> append as one atomic unit.

    ``ap`` supplies identity fields when the review names an AP the
    store has never seen (the first reviewer creates it).
    """
    return store.submit_review(review, ap=ap)
