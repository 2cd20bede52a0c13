"""Event-sourced persistence and materialized query views.

The append-only event log is the authoritative state. Three event kinds
exist: user_registered, ap_upserted, review_submitted. Live appends and
cold replay funnel through the same ``_apply`` so the materialized views
(AP summaries, contribution ledger, ownership) are reproducible
functions of the log.

On-disk format: one record per event, each a 4-byte big-endian length
prefix followed by that many bytes of UTF-8 JSON
``{"at":..,"kind":..,"payload":..,"seq":..}`` (sorted keys, compact
separators). Appends fsync per event unless wrapped in ``batched()``.

Single-writer contract: mutations must be serialized by the caller.
"""

from __future__ import annotations

import json
import os
import struct
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator

from .clustering import Cluster, cluster_aps, clusters_for_viewport
from .errors import (
    CorruptLog,
    DuplicateReview,
    DuplicateUser,
    StaleTimestamp,
    StorageFailure,
    UnknownAp,
    ValidationFailed,
)
from .model import (
    AccessPoint,
    BBox,
    NetMetrics,
    Review,
    UserAccount,
    ap_from_dict,
    ap_to_dict,
    review_from_dict,
    review_to_dict,
    user_from_dict,
    user_to_dict,
    validate_access_point,
    validate_bbox,
    validate_review,
    validate_user,
)
from .rewards import ContributionLedger, OwnershipBoard, RewardConfig, RewardEvent
from .snapshot import ApSummary, Snapshot, encode_snapshot, query_entries

LOG_FILENAME = "events.log"
_LEN = struct.Struct(">I")


class EventKind(str, Enum):
    USER_REGISTERED = "user_registered"
    AP_UPSERTED = "ap_upserted"
    REVIEW_SUBMITTED = "review_submitted"


@dataclass(frozen=True)
class Event:
    """One log record. seq is dense from 1; at never decreases."""

    seq: int
    kind: EventKind
    at: int
    payload: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "kind": self.kind.value, "at": self.at, "payload": self.payload}


def _encode_record(event: Event) -> bytes:
    data = json.dumps(event.to_dict(), sort_keys=True, separators=(",", ":")).encode("utf-8")
    return _LEN.pack(len(data)) + data


class EventLog:
    """Length-prefixed append-only file of JSON event records."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "ab")
        self._batch_depth = 0

    def close(self) -> None:
        self._fh.close()

    def append_batch(self, events: list[Event]) -> None:
        """Write events, then flush; fsync unless inside batched()."""
        try:
            for event in events:
                self._fh.write(_encode_record(event))
            self._fh.flush()
            if self._batch_depth == 0:
                os.fsync(self._fh.fileno())
        except OSError as exc:
            raise StorageFailure(f"log write failed: {exc}") from exc

    @contextmanager
    def batched(self) -> Iterator[None]:
        """Defer fsync to the end of a bulk import."""
        self._batch_depth += 1
        try:
            yield
        finally:
            self._batch_depth -= 1
            if self._batch_depth == 0:
                try:
                    self._fh.flush()
                    os.fsync(self._fh.fileno())
                except OSError as exc:
                    raise StorageFailure(f"log fsync failed: {exc}") from exc

    def read_all(self) -> Iterator[dict]:
        """Yield raw record dicts in file order; CorruptLog on damage."""
        seq_guess = 0
        with open(self.path, "rb") as fh:
            while True:
                prefix = fh.read(_LEN.size)
                if not prefix:
                    return
                seq_guess += 1
                if len(prefix) < _LEN.size:
                    raise CorruptLog("truncated length prefix", seq=seq_guess)
                (length,) = _LEN.unpack(prefix)
                data = fh.read(length)
                if len(data) < length:
                    raise CorruptLog("truncated record body", seq=seq_guess)
                try:
                    record = json.loads(data.decode("utf-8"))
                except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                    raise CorruptLog(f"undecodable record: {exc}", seq=seq_guess) from None
                yield record


@dataclass
class _ApView:
    """Mutable per-AP aggregate behind ApSummary."""

    ap: AccessPoint
    review_count: int = 0
    rating_sum: int = 0
    latest_metrics: NetMetrics | None = None
    latest_review_at: int | None = None


@dataclass
class AdvisoryStore:
    """The platform state: event log plus every derived view.

    Pass data_dir=None for a purely in-memory store (tests, simulation);
    otherwise events are persisted under ``<data_dir>/events.log`` and
    ``open()`` rebuilds state by replay.
    """

    config: RewardConfig = field(default_factory=RewardConfig)
    data_dir: str | Path | None = None
    ledger: ContributionLedger = field(init=False)
    events: list[Event] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.ledger = ContributionLedger(config=self.config)
        self.users: dict[str, UserAccount] = {}
        self.views: dict[str, _ApView] = {}
        self._review_keys: set[tuple[str, str, int]] = set()
        self._review_ids: set[str] = set()
        self._last_at = 0
        self._log = EventLog(Path(self.data_dir) / LOG_FILENAME) if self.data_dir else None

    def head_at(self) -> int:
        """Timestamp of the newest event (0 when the log is empty)."""
        return self._last_at

    # ------------------------------------------------------------------
    # log plumbing
    # ------------------------------------------------------------------

    @classmethod
    def open(cls, data_dir: str | Path, config: RewardConfig | None = None) -> AdvisoryStore:
        """Open (or create) a persistent store, replaying any existing log."""
        store = cls(config=config or RewardConfig(), data_dir=data_dir)
        assert store._log is not None
        store._replay_records(store._log.read_all())
        return store

    def close(self) -> None:
        if self._log is not None:
            self._log.close()

    def replay_into_memory(self) -> AdvisoryStore:
        """Rebuild a fresh in-memory store from this store's event list."""
        other = AdvisoryStore(config=self.config)
        other._replay_records(e.to_dict() for e in self.events)
        return other

    def _replay_records(self, records: Iterator[dict] | list[dict]) -> None:
        for record in records:
            try:
                seq = record["seq"]
                kind = EventKind(record["kind"])
                at = record["at"]
                payload = record["payload"]
            except (KeyError, TypeError, ValueError) as exc:
                raise CorruptLog(f"bad record shape: {exc}", seq=len(self.events) + 1) from None
            if seq != len(self.events) + 1:
                raise CorruptLog(f"seq gap: expected {len(self.events) + 1}, got {seq}", seq=seq)
            if not isinstance(at, int) or at < self._last_at:
                raise CorruptLog(f"timestamp decreased: {at!r} after {self._last_at}", seq=seq)
            event = Event(seq=seq, kind=kind, at=at, payload=payload)
            try:
                self._apply(event)
            except Exception as exc:
                raise CorruptLog(f"unappliable event: {exc}", seq=seq) from exc
            self.events.append(event)
            self._last_at = at

    def _append_batch(
        self, batch: list[tuple[EventKind, int, dict]]
    ) -> list[RewardEvent | None]:
        """Durably append pre-validated events, then update views.

        All-or-nothing: the batch hits disk in one write before any view
        changes, so a storage failure leaves memory untouched. Returns
        the reward outcome per event (None for AP upserts).
        """
        events = []
        next_seq = len(self.events) + 1
        for i, (kind, at, payload) in enumerate(batch):
            events.append(Event(seq=next_seq + i, kind=kind, at=at, payload=payload))
        if self._log is not None:
            self._log.append_batch(events)
        rewards = []
        for event in events:
            rewards.append(self._apply(event))
            self.events.append(event)
            self._last_at = event.at
        return rewards

    def batched(self):
        """Context manager deferring fsync during bulk imports."""
        if self._log is not None:
            return self._log.batched()
        return _null_context()

    def _check_at(self, at: int) -> None:
        if not isinstance(at, int) or isinstance(at, bool):
            raise ValidationFailed([f"at must be an integer timestamp: {at!r}"])
        if at < self._last_at:
            raise StaleTimestamp(f"event at {at} precedes log head at {self._last_at}")

    # ------------------------------------------------------------------
    # the single state-transition function (live appends and replay)
    # ------------------------------------------------------------------

    def _apply(self, event: Event) -> RewardEvent | None:
        if event.kind is EventKind.USER_REGISTERED:
            user = user_from_dict(event.payload)
            reward = self.ledger.register_user(user.user_id, event.at, event_id=f"rw-{event.seq}")
            self.users[user.user_id] = user
            return reward
        if event.kind is EventKind.AP_UPSERTED:
            ap = ap_from_dict(event.payload)
            view = self.views.get(ap.ap_id)
            if view is None:
                self.views[ap.ap_id] = _ApView(ap=ap)
            else:
                view.ap = ap  # identity fields replace; aggregates survive
            return None
        review = review_from_dict(event.payload)
        reward = self.ledger.evaluate_reward(review, event_id=f"rw-{event.seq}")
        view = self.views[review.ap_id]
        view.review_count += 1
        view.rating_sum += review.rating
        if review.metrics is not None:
            # events arrive in time order, so the last metrics seen win
            view.latest_metrics = review.metrics
        view.latest_review_at = review.at
        self._review_keys.add((review.user_id, review.ap_id, review.at))
        self._review_ids.add(review.review_id)
        return reward

    # ------------------------------------------------------------------
    # write pipeline
    # ------------------------------------------------------------------

    def register_user(
        self,
        user_id: str,
        display_name: str,
        avatar_ref: str | None,
        at: int,
    ) -> RewardEvent:
        """Admit a new user; the registration event carries R_s points."""
        user = UserAccount(
            user_id=user_id, display_name=display_name, avatar_ref=avatar_ref, registered_at=at
        )
        problems = validate_user(user)
        if problems:
            raise ValidationFailed(problems)
        self._check_at(at)
        if user_id in self.users:
            raise DuplicateUser(f"user already registered: {user_id!r}")
        rewards = self._append_batch([(EventKind.USER_REGISTERED, at, user_to_dict(user))])
        assert rewards[0] is not None
        return rewards[0]

    def upsert_ap(self, ap: AccessPoint, at: int) -> str:
        """Insert or update an AP identity. Returns 'new', 'changed', or
        'unchanged'; no event is appended when nothing differs (keeps
        imports idempotent)."""
        problems = validate_access_point(ap)
        if problems:
            raise ValidationFailed(problems)
        self._check_at(at)
        existing = self.views.get(ap.ap_id)
        if existing is not None and existing.ap == ap:
            return "unchanged"
        outcome = "new" if existing is None else "changed"
        self._append_batch([(EventKind.AP_UPSERTED, at, ap_to_dict(ap))])
        return outcome

    def submit_review(self, review: Review, ap: AccessPoint | None = None) -> RewardEvent:
        """Full pipeline: validate -> reward -> append, atomically.

        When the reviewed AP is unknown, ``ap`` supplies the identity to
        upsert first (first reviewer of an unseen AP creates it); both
        events land in one durable batch. Partial failure leaves no
        state change.
        """
        validate_review(review)
        self._check_at(review.at)
        known = review.ap_id in self.views
        if not known and ap is None:
            raise UnknownAp(f"no such AP and no AP fields supplied: {review.ap_id!r}")
        if (review.user_id, review.ap_id, review.at) in self._review_keys:
            raise DuplicateReview(
                f"duplicate review by {review.user_id!r} for {review.ap_id!r} at {review.at}"
            )
        if review.review_id in self._review_ids:
            raise ValidationFailed([f"review_id already used: {review.review_id!r}"])
        batch: list[tuple[EventKind, int, dict]] = []
        if not known:
            assert ap is not None
            if ap.ap_id != review.ap_id:
                raise ValidationFailed(
                    [f"AP fields carry id {ap.ap_id!r} but the review names {review.ap_id!r}"]
                )
            problems = validate_access_point(ap)
            if problems:
                raise ValidationFailed(problems)
            batch.append((EventKind.AP_UPSERTED, review.at, ap_to_dict(ap)))
        # pre-flight the reward rules so nothing is appended on rejection
        self.ledger.classify_review(review)
        batch.append((EventKind.REVIEW_SUBMITTED, review.at, review_to_dict(review)))
        rewards = self._append_batch(batch)
        reward = rewards[-1]
        assert reward is not None
        return reward

    # ------------------------------------------------------------------
    # reads
    # ------------------------------------------------------------------

    def summary(self, ap_id: str) -> ApSummary:
        view = self.views[ap_id]
        mean = view.rating_sum / view.review_count if view.review_count else None
        return ApSummary(
            ap=view.ap,
            review_count=view.review_count,
            mean_rating=mean,
            latest_metrics=view.latest_metrics,
            latest_review_at=view.latest_review_at,
            owner_user_id=self.ledger.owner_of(ap_id),
        )

    def all_summaries(self) -> list[ApSummary]:
        return [self.summary(ap_id) for ap_id in sorted(self.views)]

    def query_region(self, bbox: BBox, min_rating: float | None = None) -> list[ApSummary]:
        validate_bbox(bbox)
        return query_entries(self.all_summaries(), bbox, min_rating)

    def clusters(self, bbox: BBox, zoom: int) -> list[Cluster]:
        aps = [view.ap for view in self.views.values()]
        return clusters_for_viewport(aps, bbox, zoom)

    def clusters_at_radius(self, radius_m: float) -> list[Cluster]:
        return cluster_aps([view.ap for view in self.views.values()], radius_m)

    def leaderboard(self, n: int) -> list[tuple[str, int]]:
        return self.ledger.leaderboard(n)

    def ownership(self, bbox: BBox) -> list[dict]:
        validate_bbox(bbox)
        rows = []
        for ap_id in sorted(self.views):
            view = self.views[ap_id]
            if not bbox.contains(view.ap.location):
                continue
            owner = self.ledger.owner_of(ap_id)
            avatar = self.users[owner].avatar_ref if owner is not None else None
            rows.append({"ap_id": ap_id, "owner_user_id": owner, "avatar_ref": avatar})
        return rows

    def ownership_board(self, ap_ids: list[str]) -> OwnershipBoard:
        return self.ledger.ownership_board(ap_ids)

    def export_snapshot(self, bbox: BBox | None = None) -> bytes:
        """Serialize AP summaries in the offline format.

        generated_at is the timestamp of the last event, so identical
        state always yields identical bytes.
        """
        if bbox is not None:
            validate_bbox(bbox)
            entries = [s for s in self.all_summaries() if bbox.contains(s.ap.location)]
        else:
            entries = self.all_summaries()
        snap = Snapshot(
            format_version=1,
            generated_at=self._last_at,
            bbox=bbox,
            entries=tuple(entries),
        )
        return encode_snapshot(snap)


@contextmanager
def _null_context() -> Iterator[None]:
    yield


def write_log_file(events: list[Event], path: str | Path) -> None:
    """Serialize events to a standalone replayable log file."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "wb") as fh:
        for event in events:
            fh.write(_encode_record(event))
        fh.flush()
        os.fsync(fh.fileno())


def open_log_file(path: str | Path, config: RewardConfig | None = None) -> AdvisoryStore:
    """Replay any log file into a fresh in-memory store."""
    store = AdvisoryStore(config=config or RewardConfig())
    log = EventLog(path)
    try:
        store._replay_records(log.read_all())
    finally:
        log.close()
    return store
