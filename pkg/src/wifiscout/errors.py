"""Exception types shared across the platform.

Every error that can surface through the HTTP layer carries a machine
``code`` drawn from a closed vocabulary; the API layer maps codes to
status codes and never leaks stack traces.
"""

from __future__ import annotations


class AdvisoryError(Exception):
    """Base class for all platform errors."""

    code = "internal"


class MalformedBssid(AdvisoryError):
    code = "validation_failed"


class ValidationFailed(AdvisoryError):
    """Carries one entry per violated domain invariant."""

    code = "validation_failed"

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class DuplicateUser(AdvisoryError):
    code = "duplicate_user"


class UnknownUser(AdvisoryError):
    code = "unknown_user"


class UnknownAp(AdvisoryError):
    code = "unknown_ap"


class NonMonotonicTimestamp(AdvisoryError):
    """Review timestamp precedes the stored last review for (user, AP)."""

    code = "stale_timestamp"


class DuplicateReview(AdvisoryError):
    """Same (user, AP, timestamp) triple was already recorded."""

    code = "stale_timestamp"


class StaleTimestamp(AdvisoryError):
    """Event timestamp precedes the head of the event log."""

    code = "stale_timestamp"


class InvalidBbox(AdvisoryError):
    code = "invalid_bbox"


class MalformedBody(AdvisoryError):
    code = "malformed_body"


class UnsupportedVersion(AdvisoryError):
    code = "unsupported_version"


class MalformedSnapshot(AdvisoryError):
    """Snapshot bytes do not parse; ``offset`` points at the failure."""

    code = "malformed_body"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class MalformedHeader(AdvisoryError):
    """CSV header line does not match the required format exactly."""

    code = "malformed_body"


class CorruptLog(AdvisoryError):
    """Event log failed integrity checks; ``seq`` is the offending record."""

    def __init__(self, message: str, seq: int):
        super().__init__(f"{message} (seq {seq})")
        self.seq = seq


class StorageFailure(AdvisoryError):
    pass
