"""Domain type validation and identifier canonicalization."""

from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wifiscout.errors import InvalidBbox, MalformedBssid, ValidationFailed
from wifiscout.model import (
    BBox,
    GeoPoint,
    NetMetrics,
    PlaceTag,
    Review,
    canonicalize_bssid,
    parse_bbox,
    review_from_dict,
    review_to_dict,
    review_violations,
    validate_review,
)

from helpers import make_metrics, make_review


# ---------------------------------------------------------------------------
# canonicalize_bssid
# ---------------------------------------------------------------------------


def test_bssid_dash_uppercase_normalized():
    assert canonicalize_bssid("AA-BB-CC-00-11-22") == "aa:bb:cc:00:11:22"


def test_bssid_canonical_identity():
    assert canonicalize_bssid("aa:bb:cc:00:11:22") == "aa:bb:cc:00:11:22"


def test_bssid_five_octets_rejected():
    with pytest.raises(MalformedBssid):
        canonicalize_bssid("aabbcc0011")


@pytest.mark.parametrize(
    "raw",
    ["", "aa:bb:cc:00:11:2g", "aa:bb:cc:00:11:22:33", "aabbcc00112233", "hello world!"],
)
def test_bssid_rejections(raw):
    with pytest.raises(MalformedBssid):
        canonicalize_bssid(raw)


_hex = "0123456789abcdefABCDEF"


@given(
    digits=st.text(alphabet=_hex, min_size=12, max_size=12),
    sep=st.sampled_from(["", ":", "-"]),
)
def test_bssid_idempotent(digits, sep):
    grouped = sep.join(digits[i : i + 2] for i in range(0, 12, 2))
    once = canonicalize_bssid(grouped)
    assert canonicalize_bssid(once) == once
    assert once == once.lower()
    assert len(once) == 17 and once.count(":") == 5


# ---------------------------------------------------------------------------
# validate_review
# ---------------------------------------------------------------------------


def test_valid_review_accepted():
    review = make_review(rating=5, at=1_700_000_000)
    assert validate_review(review) is review


def test_rating_zero_rejected():
    with pytest.raises(ValidationFailed) as err:
        validate_review(make_review(rating=0))
    assert any("rating" in v for v in err.value.violations)


def test_two_violations_two_entries():
    # rating=6 and rssi_dbm=+10 break exactly two invariants
    review = make_review(rating=6, metrics=make_metrics(rssi=10))
    with pytest.raises(ValidationFailed) as err:
        validate_review(review)
    assert len(err.value.violations) == 2


def test_comment_length_cap():
    assert validate_review(make_review(comment="x" * 1000))
    with pytest.raises(ValidationFailed):
        validate_review(make_review(comment="x" * 1001))


def test_timestamp_must_be_positive_int():
    with pytest.raises(ValidationFailed):
        validate_review(make_review(at=0))
    with pytest.raises(ValidationFailed):
        validate_review(make_review(at=-5))
    with pytest.raises(ValidationFailed):
        validate_review(make_review(at=1.5))


def test_bool_is_not_a_rating():
    with pytest.raises(ValidationFailed):
        validate_review(make_review(rating=True))


def test_place_needs_street_address():
    with pytest.raises(ValidationFailed):
        validate_review(make_review(place=PlaceTag(street_address="")))


def _independent_check(review: Review) -> bool:
    """Direct restatement of the type invariants, separate from the impl."""
    ok = isinstance(review.rating, int) and not isinstance(review.rating, bool)
    ok = ok and review.rating in (1, 2, 3, 4, 5)
    ok = ok and isinstance(review.at, int) and not isinstance(review.at, bool) and review.at > 0
    ok = ok and bool(review.review_id) and bool(review.user_id) and bool(review.ap_id)
    if review.comment is not None:
        ok = ok and isinstance(review.comment, str) and len(review.comment) <= 1000
    m = review.metrics
    if m is not None:
        ok = ok and isinstance(m.rssi_dbm, int) and not isinstance(m.rssi_dbm, bool)
        ok = ok and -120 <= m.rssi_dbm <= 0
        for v in (m.link_speed_mbps, m.upload_mbps, m.download_mbps):
            ok = ok and isinstance(v, (int, float)) and not isinstance(v, bool)
            ok = ok and math.isfinite(v) and v >= 0
    if review.place is not None:
        ok = ok and isinstance(review.place.street_address, str) and bool(review.place.street_address)
    return ok


@given(
    rating=st.one_of(st.integers(-3, 9), st.just(2.5), st.booleans()),
    at=st.one_of(st.integers(-100, 100), st.integers(1, 2**40)),
    comment=st.one_of(st.none(), st.text(max_size=40), st.just("y" * 1001)),
    rssi=st.one_of(st.none(), st.integers(-200, 50)),
    speed=st.one_of(st.floats(allow_nan=False, allow_infinity=False, width=32), st.just(float("nan"))),
)
def test_fuzzed_reviews_match_invariant_recheck(rating, at, comment, rssi, speed):
    metrics = None if rssi is None else NetMetrics(rssi, float(speed), 1.0, 2.0)
    review = make_review(rating=rating, at=at, comment=comment, metrics=metrics)
    assert (not review_violations(review)) == _independent_check(review)


# ---------------------------------------------------------------------------
# bbox
# ---------------------------------------------------------------------------


def test_bbox_parse_roundtrip():
    box = parse_bbox("1.25,103.7,1.45,103.9")
    assert box == BBox(1.25, 103.7, 1.45, 103.9)
    assert box.contains(GeoPoint(1.3, 103.8))
    assert not box.contains(GeoPoint(1.5, 103.8))


def test_bbox_min_over_max_rejected():
    with pytest.raises(InvalidBbox):
        parse_bbox("2,103,1,104")
    with pytest.raises(InvalidBbox):
        parse_bbox("1,105,2,104")


def test_bbox_wrong_arity_rejected():
    with pytest.raises(InvalidBbox):
        parse_bbox("1,2,3")
    with pytest.raises(InvalidBbox):
        parse_bbox("a,b,c,d")


def test_bbox_out_of_range_rejected():
    with pytest.raises(InvalidBbox):
        parse_bbox("-91,0,0,0")
    with pytest.raises(InvalidBbox):
        parse_bbox("0,0,0,181")


# ---------------------------------------------------------------------------
# wire serialization
# ---------------------------------------------------------------------------


def test_review_dict_roundtrip():
    review = make_review(
        comment="solid signal",
        metrics=make_metrics(),
        place=PlaceTag(street_address="3 Oak Rd", floor="2", room="201"),
    )
    assert review_from_dict(review_to_dict(review)) == review


def test_review_dict_roundtrip_minimal():
    review = make_review()
    assert review_from_dict(review_to_dict(review)) == review
