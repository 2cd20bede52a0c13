"""HTTP/JSON surface of the advisory platform.

Routes (all under /api/v1):

  POST /users        register a user, returns the registration reward
  POST /reviews      submit a review, returns points and rule case
  GET  /aps          region query: bbox, optional min_rating
  GET  /clusters     map clusters: bbox, zoom 1..20
  GET  /leaderboard  top users: optional n (default 10)
  GET  /ownership    AP owners and avatars inside a bbox
  GET  /snapshot     offline snapshot bytes, optional bbox

bbox wire form is ``min_lat,min_lon,max_lat,max_lon``. Every error body
is ``{"error": {"code", "message", "details"}}`` with code from a closed
vocabulary; stack traces never leak. user_id in request bodies is
trusted (no auth protocol; hook point for one is the register/review
handlers).
"""

from __future__ import annotations

import time
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .errors import AdvisoryError, InvalidBbox, MalformedBody, ValidationFailed
from .model import (
    AccessPoint,
    ApSource,
    GeoPoint,
    NetMetrics,
    PlaceTag,
    Review,
    canonicalize_bssid,
    parse_bbox,
)
from .store import AdvisoryStore

STATUS_BY_CODE = {
    "validation_failed": 400,
    "malformed_body": 400,
    "invalid_bbox": 400,
    "unsupported_version": 400,
    "unknown_user": 404,
    "unknown_ap": 404,
    "duplicate_user": 409,
    "stale_timestamp": 409,
    "internal": 500,
}


def error_payload(code: str, message: str, details: list | None = None) -> dict:
    return {"error": {"code": code, "message": message, "details": details or []}}


def _error_response(exc: AdvisoryError) -> JSONResponse:
    details = exc.violations if isinstance(exc, ValidationFailed) else []
    return JSONResponse(
        status_code=STATUS_BY_CODE.get(exc.code, 500),
        content=error_payload(exc.code, str(exc), details),
    )


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise MalformedBody("request body is not valid JSON") from None
    if not isinstance(body, dict):
        raise MalformedBody("request body must be a JSON object")
    return body


def _require(body: dict, key: str) -> Any:
    if key not in body or body[key] is None:
        raise MalformedBody(f"missing required field: {key}")
    return body[key]


def _opt_dict(body: dict, key: str) -> dict | None:
    value = body.get(key)
    if value is None:
        return None
    if not isinstance(value, dict):
        raise MalformedBody(f"{key} must be a JSON object")
    return value


def _parse_place(d: dict | None, context: str) -> PlaceTag | None:
    if d is None:
        return None
    if "street_address" not in d:
        raise MalformedBody(f"{context}.street_address is required")
    return PlaceTag(
        street_address=d["street_address"], floor=d.get("floor"), room=d.get("room")
    )


def _parse_metrics(d: dict | None) -> NetMetrics | None:
    if d is None:
        return None
    missing = [k for k in ("rssi_dbm", "link_speed_mbps", "upload_mbps", "download_mbps") if k not in d]
    if missing:
        raise MalformedBody(f"metrics missing fields: {', '.join(missing)}")
    return NetMetrics(
        rssi_dbm=d["rssi_dbm"],
        link_speed_mbps=d["link_speed_mbps"],
        upload_mbps=d["upload_mbps"],
        download_mbps=d["download_mbps"],
    )


def _resolve_ap_id(body: dict, ap_obj: dict | None) -> str:
    if "ap_id" in body and body["ap_id"] is not None:
        return body["ap_id"]
    if "bssid" in body and body["bssid"] is not None:
        return canonicalize_bssid(body["bssid"])
    if ap_obj is not None and ap_obj.get("bssid") is not None:
        return canonicalize_bssid(ap_obj["bssid"])
    raise MalformedBody("review must name an AP via ap_id or bssid")


def _build_new_ap(ap_id: str, ap_obj: dict, review_place: PlaceTag | None) -> AccessPoint:
    for key in ("ssid", "lat", "lon"):
        if key not in ap_obj:
            raise MalformedBody(f"ap.{key} is required to create a new AP")
    place = _parse_place(
        ap_obj if "street_address" in ap_obj else None, "ap"
    ) or review_place
    bssid = None if ap_id.startswith("ext:") else ap_id
    source = ApSource.EXTERNAL if ap_id.startswith("ext:") else ApSource.CROWDSENSED
    return AccessPoint(
        ap_id=ap_id,
        bssid=bssid,
        ssid=ap_obj["ssid"],
        location=GeoPoint(ap_obj["lat"], ap_obj["lon"]),
        place=place,
        source=source,
    )


def _query_bbox(request: Request):
    raw = request.query_params.get("bbox")
    if raw is None:
        raise InvalidBbox("bbox query parameter required")
    return parse_bbox(raw)


def _query_int(request: Request, key: str, default: int | None = None) -> int | None:
    raw = request.query_params.get(key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValidationFailed([f"{key} must be an integer: {raw!r}"]) from None


def _query_float(request: Request, key: str) -> float | None:
    raw = request.query_params.get(key)
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        raise ValidationFailed([f"{key} must be a number: {raw!r}"]) from None


def create_app(store: AdvisoryStore, ui_dir: str | None = None) -> FastAPI:
    """Build the HTTP app around one store instance."""
    app = FastAPI(title="wifiscout", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(AdvisoryError)
    async def _advisory_error(_request: Request, exc: AdvisoryError) -> JSONResponse:
        return _error_response(exc)

    @app.exception_handler(Exception)
    async def _unexpected_error(_request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(
            status_code=500,
            content=error_payload("internal", "internal error"),
        )

    @app.post("/api/v1/users")
    async def handle_register(request: Request) -> JSONResponse:
        body = await _json_body(request)
        user_id = _require(body, "user_id")
        display_name = _require(body, "display_name")
        avatar_ref = body.get("avatar_ref")
        at = body.get("at")
        if at is None:
            at = int(time.time())
        reward = store.register_user(user_id, display_name, avatar_ref, at)
        return JSONResponse(status_code=201, content=reward.to_dict())

    @app.post("/api/v1/reviews")
    async def handle_submit_review(request: Request) -> JSONResponse:
        body = await _json_body(request)
        user_id = _require(body, "user_id")
        rating = _require(body, "rating")
        at = _require(body, "at")
        ap_obj = _opt_dict(body, "ap")
        ap_id = _resolve_ap_id(body, ap_obj)
        place = _parse_place(_opt_dict(body, "place"), "place")
        review = Review(
            review_id=body.get("review_id") or f"rv-{user_id}-{ap_id}-{at}",
            user_id=user_id,
            ap_id=ap_id,
            at=at,
            rating=rating,
            comment=body.get("comment"),
            metrics=_parse_metrics(_opt_dict(body, "metrics")),
            place=place,
        )
        new_ap = None
        if ap_obj is not None:
            new_ap = _build_new_ap(ap_id, ap_obj, place)
        reward = store.submit_review(review, ap=new_ap)
        return JSONResponse(status_code=201, content=reward.to_dict())

    @app.get("/api/v1/aps")
    async def handle_region_query(request: Request) -> JSONResponse:
        bbox = _query_bbox(request)
        min_rating = _query_float(request, "min_rating")
        summaries = store.query_region(bbox, min_rating)
        return JSONResponse(content=[s.to_dict() for s in summaries])

    @app.get("/api/v1/clusters")
    async def handle_clusters(request: Request) -> JSONResponse:
        bbox = _query_bbox(request)
        zoom = _query_int(request, "zoom")
        if zoom is None:
            raise ValidationFailed(["zoom query parameter required"])
        clusters = store.clusters(bbox, zoom)
        return JSONResponse(content=[c.to_dict() for c in clusters])

    @app.get("/api/v1/leaderboard")
    async def handle_leaderboard(request: Request) -> JSONResponse:
        n = _query_int(request, "n", default=10)
        rows = []
        for user_id, total in store.leaderboard(n):
            user = store.users[user_id]
            rows.append(
                {
                    "user_id": user_id,
                    "display_name": user.display_name,
                    "avatar_ref": user.avatar_ref,
                    "total_points": total,
                }
            )
        return JSONResponse(content=rows)

    @app.get("/api/v1/ownership")
    async def handle_ownership(request: Request) -> JSONResponse:
        bbox = _query_bbox(request)
        return JSONResponse(content=store.ownership(bbox))

    @app.get("/api/v1/snapshot")
    async def handle_snapshot(request: Request) -> Response:
        raw = request.query_params.get("bbox")
        bbox = parse_bbox(raw) if raw is not None else None
        data = store.export_snapshot(bbox)
        return Response(content=data, media_type="application/octet-stream")

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
