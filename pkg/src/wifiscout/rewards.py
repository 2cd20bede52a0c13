"""Gamification reward engine.

Point rules per review, per-user totals, per-(user, AP) contribution
scores, leaderboard ranking, and AP ownership.

Rules applied by evaluate_reward, with R_s / R / T from RewardConfig:

  registration         -> R_s points
  first review of an AP by a user -> R points
  repeat review, interval tau >= T -> R/2 points   (tau non-strict)
  repeat review, interval tau <  T -> 0 points

tau is measured against the most recent prior review for (user, AP),
whether or not that prior review earned points. Rapid-fire reviews
therefore keep resetting the clock, which is the anti-spam intent.

Per-AP contribution score is the sum of points earned from that AP's
reviews; starting points never enter it. The AP's owner is the user
with the maximal positive score (ties: earliest attainment, then
lexicographic user_id).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import DuplicateUser, NonMonotonicTimestamp, UnknownUser
from .model import Review

DEFAULT_STARTING_POINTS = 0
DEFAULT_FULL_REWARD = 10
DEFAULT_INTERVAL_THRESHOLD_SECS = 21600  # 6 hours


class RuleCase(str, Enum):
    REGISTRATION = "registration"
    FIRST_REVIEW = "first_review"
    SPACED_REVIEW = "spaced_review"
    SUPPRESSED_REVIEW = "suppressed_review"


@dataclass(frozen=True)
class RewardConfig:
    """Tunable constants of the incentive scheme.

    full_reward must be even so the half reward stays integral.
    interval_threshold_secs = 0 is the degenerate config in which no
    review is ever suppressed.
    """

    starting_points: int = DEFAULT_STARTING_POINTS
    full_reward: int = DEFAULT_FULL_REWARD
    interval_threshold_secs: int = DEFAULT_INTERVAL_THRESHOLD_SECS

    def __post_init__(self) -> None:
        if not isinstance(self.starting_points, int) or self.starting_points < 0:
            raise ValueError(f"starting_points must be a non-negative integer: {self.starting_points!r}")
        if not isinstance(self.full_reward, int) or self.full_reward <= 0:
            raise ValueError(f"full_reward must be a positive integer: {self.full_reward!r}")
        if self.full_reward % 2 != 0:
            raise ValueError(f"full_reward must be even: {self.full_reward!r}")
        if not isinstance(self.interval_threshold_secs, int) or self.interval_threshold_secs < 0:
            raise ValueError(
                f"interval_threshold_secs must be a non-negative integer: {self.interval_threshold_secs!r}"
            )


@dataclass(frozen=True)
class RewardEvent:
    """Points outcome of one ledger action, with rule-case provenance."""

    event_id: str
    user_id: str
    ap_id: str | None  # absent for registration
    at: int
    points: int
    rule_case: RuleCase

    def to_dict(self) -> dict:
        return {
            "event_id": self.event_id,
            "user_id": self.user_id,
            "ap_id": self.ap_id,
            "at": self.at,
            "points": self.points,
            "rule_case": self.rule_case.value,
        }


@dataclass(frozen=True)
class OwnershipBoard:
    owner: dict[str, str | None]


@dataclass
class ContributionLedger:
    """Mutable per-user and per-(user, AP) accounting.

    Mutations must be serialized by the caller (single-writer contract);
    reads are safe against a quiescent ledger. Deterministic given an
    event order.
    """

    config: RewardConfig = field(default_factory=RewardConfig)
    # user_id -> total reward points (includes starting points)
    users: dict[str, int] = field(default_factory=dict)
    # user_id -> registration timestamp, for leaderboard tie-breaks
    registered_at: dict[str, int] = field(default_factory=dict)
    # (user_id, ap_id) -> timestamp of the most recent prior review
    last_review_at: dict[tuple[str, str], int] = field(default_factory=dict)
    # (user_id, ap_id) -> points accumulated from that AP (R, R/2, 0 only)
    ap_scores: dict[tuple[str, str], int] = field(default_factory=dict)
    # (user_id, ap_id) -> timestamp at which the current ap_score was reached
    score_attained_at: dict[tuple[str, str], int] = field(default_factory=dict)
    # ap_id -> user_ids that have reviewed it; makes owner_of cheap
    _ap_users: dict[str, set[str]] = field(default_factory=dict)
    _event_counter: int = 0

    def _next_event_id(self) -> str:
        self._event_counter += 1
        return f"rw-{self._event_counter}"

    # ------------------------------------------------------------------
    # mutations
    # ------------------------------------------------------------------

    def register_user(self, user_id: str, at: int, event_id: str | None = None) -> RewardEvent:
        """Admit a new user with the configured starting points."""
        if user_id in self.users:
            raise DuplicateUser(f"user already registered: {user_id!r}")
        eid = event_id if event_id is not None else self._next_event_id()
        self.users[user_id] = self.config.starting_points
        self.registered_at[user_id] = at
        return RewardEvent(
            event_id=eid,
            user_id=user_id,
            ap_id=None,
            at=at,
            points=self.config.starting_points,
            rule_case=RuleCase.REGISTRATION,
        )

    def classify_review(self, review: Review) -> tuple[RuleCase, int]:
        """Pure rule lookup: which case applies and how many points.

        Raises without mutating, so callers can pre-flight a review
        before committing it anywhere.
        """
        if review.user_id not in self.users:
            raise UnknownUser(f"user not registered: {review.user_id!r}")
        key = (review.user_id, review.ap_id)
        prior = self.last_review_at.get(key)
        if prior is None:
            return RuleCase.FIRST_REVIEW, self.config.full_reward
        if review.at < prior:
            raise NonMonotonicTimestamp(
                f"review at {review.at} precedes last review at {prior} for {key!r}"
            )
        tau = review.at - prior
        if tau >= self.config.interval_threshold_secs:
            return RuleCase.SPACED_REVIEW, self.config.full_reward // 2
        return RuleCase.SUPPRESSED_REVIEW, 0

    def evaluate_reward(self, review: Review, event_id: str | None = None) -> RewardEvent:
        """Apply the reward rules to one validated review.

        Updates last_review_at, ap_scores, score_attained_at, and the
        user's total atomically with respect to other ledger mutations.
        """
        rule_case, points = self.classify_review(review)
        eid = event_id if event_id is not None else self._next_event_id()
        key = (review.user_id, review.ap_id)
        self.last_review_at[key] = review.at
        self.ap_scores[key] = self.ap_scores.get(key, 0) + points
        if points > 0:
            # zero awards leave the current score value (and when it was
            # reached) untouched
            self.score_attained_at[key] = review.at
        self.users[review.user_id] += points
        self._ap_users.setdefault(review.ap_id, set()).add(review.user_id)
        return RewardEvent(
            event_id=eid,
            user_id=review.user_id,
            ap_id=review.ap_id,
            at=review.at,
            points=points,
            rule_case=rule_case,
        )

    # ------------------------------------------------------------------
    # reads
    # ------------------------------------------------------------------

    def leaderboard(self, n: int) -> list[tuple[str, int]]:
        """Top n users by total points.

        Ties broken by earlier registration, then lexicographic user_id.
        """
        if n <= 0:
            return []
        ranked = sorted(
            self.users.items(),
            key=lambda item: (-item[1], self.registered_at[item[0]], item[0]),
        )
        return ranked[:n]

    def owner_of(self, ap_id: str) -> str | None:
        """Top contributor for one AP, or None when nobody scored."""
        best: tuple[int, int, str] | None = None
        for user_id in self._ap_users.get(ap_id, ()):
            key = (user_id, ap_id)
            score = self.ap_scores.get(key, 0)
            if score <= 0:
                continue
            candidate = (-score, self.score_attained_at[key], user_id)
            if best is None or candidate < best:
                best = candidate
        return best[2] if best is not None else None

    def ownership_board(self, ap_ids: list[str]) -> OwnershipBoard:
        return OwnershipBoard(owner={ap_id: self.owner_of(ap_id) for ap_id in ap_ids})


# Free-function spellings of the ledger operations, for callers that
# prefer the operation-first style.


def register_user(ledger: ContributionLedger, user_id: str, at: int) -> RewardEvent:
    return ledger.register_user(user_id, at)


def evaluate_reward(ledger: ContributionLedger, review: Review) -> RewardEvent:
    return ledger.evaluate_reward(review)


def leaderboard(ledger: ContributionLedger, n: int) -> list[tuple[str, int]]:
    return ledger.leaderboard(n)


def owner_of(ledger: ContributionLedger, ap_id: str) -> str | None:
    return ledger.owner_of(ap_id)


def ownership_board(ledger: ContributionLedger, ap_ids: list[str]) -> OwnershipBoard:
    return ledger.ownership_board(ap_ids)
