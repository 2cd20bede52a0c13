"""Deterministic synthetic-crowd simulator.

Drives the full pipeline (registrations, AP upserts, reviews) to
demonstrate ownership dynamics at desk scale. Two event sources:

* ``generate_events(scenario)`` draws a random crowd from the scenario
  seed: Poisson daily review counts per user, Zipf AP preference (so a
  few APs are contested), Gaussian ratings around a per-AP quality.
  Identical scenario, identical stream, on every platform.

* ``overtaking_script()`` is a fixed two-user script on one AP where
  ben overtakes ava as owner at a known event, then ava burst-reviews
  inside the spacing threshold and earns exactly one nonzero award.

``run_simulation`` feeds either stream through a fresh in-memory store
and reports the final leaderboard, per-AP ownership-change counts, and
the reward histogram by rule case.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .model import (
    AccessPoint,
    ApSource,
    BBox,
    GeoPoint,
    NetMetrics,
    PlaceTag,
    Review,
    ap_to_dict,
    review_from_dict,
    review_to_dict,
    user_from_dict,
    user_to_dict,
    ap_from_dict,
    UserAccount,
)
from .rewards import RewardConfig, RuleCase
from .store import AdvisoryStore, EventKind

BASE_AT = 1_700_000_000
_SECS_PER_DAY = 86_400

_STREETS = (
    "Arcadia Lane",
    "Harbor Walk",
    "Meridian Road",
    "Quayside Ave",
    "Fern Hill",
)


@dataclass(frozen=True)
class Scenario:
    """Parameters of a random crowd. Same scenario, same event stream."""

    seed: int
    n_users: int
    n_aps: int
    duration_days: int
    reviews_per_user_per_day: float = 3.0
    geography: BBox = BBox(1.25, 103.7, 1.45, 103.9)
    zipf_alpha: float = 1.2

    def __post_init__(self) -> None:
        if self.n_users < 0 or self.n_aps < 0:
            raise ValueError("n_users and n_aps must be non-negative")
        if self.duration_days < 1:
            raise ValueError("duration_days must be at least 1")
        if self.reviews_per_user_per_day < 0:
            raise ValueError("reviews_per_user_per_day must be non-negative")
        if not math.isfinite(self.zipf_alpha) or self.zipf_alpha < 0:
            raise ValueError("zipf_alpha must be a non-negative number")
        box = self.geography
        if box.min_lat > box.max_lat or box.min_lon > box.max_lon:
            raise ValueError("geography min bound exceeds max bound")


# One pipeline intent: (kind, at, wire payload). seq is assigned by the
# store at append time.
Intent = tuple[EventKind, int, dict]


def _poisson(rng: random.Random, lam: float) -> int:
    # Knuth's product-of-uniforms; exact given the rng stream
    limit = math.exp(-lam)
    k = 0
    p = rng.random()
    while p > limit:
        k += 1
        p *= rng.random()
    return k


def _sim_user(i: int) -> UserAccount:
    return UserAccount(
        user_id=f"sim-user-{i:04d}",
        display_name=f"Sim User {i}",
        avatar_ref=f"avatars/u{i}.png",
        registered_at=BASE_AT,
    )


def _sim_aps(scenario: Scenario) -> tuple[list[AccessPoint], list[float]]:
    """AP placement and per-AP quality, from the seed's /aps stream."""
    rng = random.Random(f"{scenario.seed}/aps")
    box = scenario.geography
    aps: list[AccessPoint] = []
    quality: list[float] = []
    for i in range(scenario.n_aps):
        lat = round(rng.uniform(box.min_lat, box.max_lat), 6)
        lon = round(rng.uniform(box.min_lon, box.max_lon), 6)
        quality.append(min(5.0, max(1.0, rng.gauss(3.5, 0.8))))
        bssid = "aa:bb:{:02x}:{:02x}:{:02x}:{:02x}".format(
            (i >> 24) & 0xFF, (i >> 16) & 0xFF, (i >> 8) & 0xFF, i & 0xFF
        )
        aps.append(
            AccessPoint(
                ap_id=bssid,
                bssid=bssid,
                ssid=f"net-{i:04d}",
                location=GeoPoint(lat, lon),
                place=PlaceTag(street_address=f"{i + 1} {_STREETS[i % len(_STREETS)]}"),
                source=ApSource.CROWDSENSED,
            )
        )
    return aps, quality


def generate_events(scenario: Scenario) -> list[Intent]:
    """Deterministic, time-ordered event stream for a scenario.

    Per user, all daily Poisson counts are drawn first, then the review
    details day by day, from a dedicated child rng; an independent
    implementation of the same draw order reproduces the stream.
    """
    aps, quality = _sim_aps(scenario)
    intents: list[Intent] = []
    for i in range(scenario.n_users):
        intents.append((EventKind.USER_REGISTERED, BASE_AT, user_to_dict(_sim_user(i))))
    for ap in aps:
        intents.append((EventKind.AP_UPSERTED, BASE_AT, ap_to_dict(ap)))

    weights = [1.0 / (r + 1) ** scenario.zipf_alpha for r in range(scenario.n_aps)]
    # (at, user index, per-user counter) is a total order: one user
    # never has two reviews in the same second
    keyed: list[tuple[int, int, int, Review]] = []
    for i in range(scenario.n_users):
        if scenario.n_aps == 0:
            break
        user = _sim_user(i)
        rng = random.Random(f"{scenario.seed}/user/{i}")
        counts = [
            min(_poisson(rng, scenario.reviews_per_user_per_day), _SECS_PER_DAY)
            for _ in range(scenario.duration_days)
        ]
        n_reviews = 0
        for day, count in enumerate(counts):
            offsets = sorted(rng.sample(range(_SECS_PER_DAY), count))
            for offset in offsets:
                at = BASE_AT + 1 + day * _SECS_PER_DAY + offset
                ap_index = rng.choices(range(scenario.n_aps), weights=weights, k=1)[0]
                rating = min(5, max(1, round(rng.gauss(quality[ap_index], 0.7))))
                metrics = None
                if rng.random() < 0.7:
                    metrics = NetMetrics(
                        rssi_dbm=rng.randint(-90, -35),
                        link_speed_mbps=round(rng.uniform(10.0, 300.0), 1),
                        upload_mbps=round(rng.uniform(1.0, 50.0), 1),
                        download_mbps=round(rng.uniform(5.0, 200.0), 1),
                    )
                n_reviews += 1
                review = Review(
                    review_id=f"rv-{user.user_id}-{n_reviews}",
                    user_id=user.user_id,
                    ap_id=aps[ap_index].ap_id,
                    at=at,
                    rating=rating,
                    comment=None,
                    metrics=metrics,
                    place=None,
                )
                keyed.append((at, i, n_reviews, review))
    keyed.sort(key=lambda item: item[:3])
    intents.extend(
        (EventKind.REVIEW_SUBMITTED, at, review_to_dict(review)) for at, _, _, review in keyed
    )
    return intents


# ---------------------------------------------------------------------------
# the scripted overtaking demo
# ---------------------------------------------------------------------------

OVERTAKING_AP_ID = "aa:bb:cc:00:00:01"
# seq of the review at which ownership flips from ava to ben, and the
# count of ownership transitions the AP sees (none -> ava -> ben)
OVERTAKING_FLIP_SEQ = 14
OVERTAKING_CHANGES = 2

# (offset from BASE_AT, user). Hand-tuned against the reward rules with
# defaults R=10, T=21600: ava opens with five spaced reviews (10+4*5 =
# 30 points on this AP), ben answers with six (10+5*5 = 35) and takes
# ownership at his sixth (seq 14; at the 30:30 tie ava keeps it on
# earlier attainment). ava then fires a five-review burst inside one
# threshold window: the first earns 5 (35:35 tie, ben keeps on earlier
# attainment), the other four are suppressed.
_OVERTAKING_REVIEWS: tuple[tuple[int, str], ...] = (
    (3_600, "ava"),
    (32_400, "ava"),
    (61_200, "ava"),
    (90_000, "ava"),
    (93_600, "ben"),
    (115_200, "ben"),
    (118_800, "ava"),
    (136_800, "ben"),
    (158_400, "ben"),
    (180_000, "ben"),
    (201_600, "ben"),
    (203_000, "ava"),
    (203_600, "ava"),
    (204_200, "ava"),
    (204_800, "ava"),
    (205_400, "ava"),
)

_RATING_CYCLE = (4, 5, 3, 4, 5, 4)


def overtaking_script() -> list[Intent]:
    """Fixed two-user, one-AP event stream with a known ownership flip."""
    users = {
        "ava": UserAccount("ava", "Ava Tan", "avatars/ava.png", BASE_AT),
        "ben": UserAccount("ben", "Ben Ng", "avatars/ben.png", BASE_AT),
    }
    ap = AccessPoint(
        ap_id=OVERTAKING_AP_ID,
        bssid=OVERTAKING_AP_ID,
        ssid="corner-cafe",
        location=GeoPoint(1.3521, 103.8198),
        place=PlaceTag(street_address="7 Arcadia Lane", floor="1"),
        source=ApSource.CROWDSENSED,
    )
    intents: list[Intent] = [
        (EventKind.USER_REGISTERED, BASE_AT, user_to_dict(users["ava"])),
        (EventKind.USER_REGISTERED, BASE_AT, user_to_dict(users["ben"])),
        (EventKind.AP_UPSERTED, BASE_AT, ap_to_dict(ap)),
    ]
    counters = {"ava": 0, "ben": 0}
    for n, (offset, who) in enumerate(_OVERTAKING_REVIEWS):
        counters[who] += 1
        review = Review(
            review_id=f"rv-{who}-{counters[who]}",
            user_id=who,
            ap_id=OVERTAKING_AP_ID,
            at=BASE_AT + offset,
            rating=_RATING_CYCLE[n % len(_RATING_CYCLE)],
        )
        intents.append((EventKind.REVIEW_SUBMITTED, BASE_AT + offset, review_to_dict(review)))
    return intents


# ---------------------------------------------------------------------------
# running a stream through the pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OwnershipChange:
    seq: int
    at: int
    ap_id: str
    prior_owner: str | None
    new_owner: str | None


@dataclass
class SimReport:
    """Exact functions of the event stream; see to_dict for the shape."""

    mode: str
    seed: int
    n_events: int
    leaderboard: list[tuple[str, int]]
    ownership: dict[str, str | None]
    ownership_changes: dict[str, int]
    transitions: list[OwnershipChange]
    reward_histogram: dict[str, dict[str, int]]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "n_events": self.n_events,
            "leaderboard": [[user_id, points] for user_id, points in self.leaderboard],
            "ownership": self.ownership,
            "ownership_changes": self.ownership_changes,
            "transitions": [
                {
                    "seq": t.seq,
                    "at": t.at,
                    "ap_id": t.ap_id,
                    "from": t.prior_owner,
                    "to": t.new_owner,
                }
                for t in self.transitions
            ],
            "reward_histogram": self.reward_histogram,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def apply_intents(store: AdvisoryStore, intents: list[Intent]) -> SimRunState:
    """Feed intents through the store's write pipeline, tracking ownership."""
    state = SimRunState()
    for kind, at, payload in intents:
        if kind is EventKind.USER_REGISTERED:
            user = user_from_dict(payload)
            reward = store.register_user(user.user_id, user.display_name, user.avatar_ref, at)
        elif kind is EventKind.AP_UPSERTED:
            store.upsert_ap(ap_from_dict(payload), at)
            state.owner_by_ap.setdefault(payload["ap_id"], None)
            state.changes.setdefault(payload["ap_id"], 0)
            continue
        else:
            review = review_from_dict(payload)
            reward = store.submit_review(review)
            prior = state.owner_by_ap.get(review.ap_id)
            current = store.ledger.owner_of(review.ap_id)
            if current != prior:
                state.owner_by_ap[review.ap_id] = current
                state.changes[review.ap_id] = state.changes.get(review.ap_id, 0) + 1
                state.transitions.append(
                    OwnershipChange(
                        seq=store.events[-1].seq,
                        at=at,
                        ap_id=review.ap_id,
                        prior_owner=prior,
                        new_owner=current,
                    )
                )
        bucket = state.histogram[reward.rule_case.value]
        bucket["events"] += 1
        bucket["points"] += reward.points
    return state


@dataclass
class SimRunState:
    owner_by_ap: dict[str, str | None] = field(default_factory=dict)
    changes: dict[str, int] = field(default_factory=dict)
    transitions: list[OwnershipChange] = field(default_factory=list)
    histogram: dict[str, dict[str, int]] = field(
        default_factory=lambda: {case.value: {"events": 0, "points": 0} for case in RuleCase}
    )


def run_with_store(
    scenario: Scenario,
    events: list[Intent] | None = None,
    reward_config: RewardConfig | None = None,
    mode: str = "random",
) -> tuple[SimReport, AdvisoryStore]:
    """Run a stream (default: generated from the scenario) end to end.

    Returns the report plus the populated store, for callers that want
    to render figures or export snapshots of the final state.
    """
    intents = events if events is not None else generate_events(scenario)
    store = AdvisoryStore(config=reward_config or RewardConfig())
    state = apply_intents(store, intents)
    report = SimReport(
        mode=mode,
        seed=scenario.seed,
        n_events=len(store.events),
        leaderboard=store.leaderboard(len(store.users)),
        ownership={ap_id: state.owner_by_ap[ap_id] for ap_id in sorted(state.owner_by_ap)},
        ownership_changes={ap_id: state.changes[ap_id] for ap_id in sorted(state.changes)},
        transitions=state.transitions,
        reward_histogram=state.histogram,
    )
    return report, store


def run_simulation(
    scenario: Scenario,
    events: list[Intent] | None = None,
    reward_config: RewardConfig | None = None,
    mode: str = "random",
) -> SimReport:
    """Pure function of the scenario (or of an explicit event stream)."""
    report, _ = run_with_store(scenario, events=events, reward_config=reward_config, mode=mode)
    return report


def run_overtaking_demo(
    seed: int = 42, reward_config: RewardConfig | None = None
) -> tuple[SimReport, AdvisoryStore]:
    scenario = Scenario(seed=seed, n_users=2, n_aps=1, duration_days=3)
    return run_with_store(
        scenario, events=overtaking_script(), reward_config=reward_config, mode="overtaking"
    )
