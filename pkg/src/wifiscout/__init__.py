"""Crowdsensed WiFi advisory platform.

Users review WiFi access points; the platform scores contributors with
a spaced-repeat reward scheme, assigns each AP an owner (its top
contributor), clusters hotspots for map display, and serves both online
region queries and exportable offline-search snapshots.
"""

from .clustering import Cluster, cluster_aps, clusters_for_viewport, haversine_m
from .config import ServiceConfig, load_config
from .errors import AdvisoryError
from .ingest import ExternalHotspotRow, import_external_csv, submit_review
from .model import (
    AccessPoint,
    ApSource,
    BBox,
    GeoPoint,
    NetMetrics,
    PlaceTag,
    Review,
    UserAccount,
    canonicalize_bssid,
    validate_review,
)
from .rewards import (
    ContributionLedger,
    OwnershipBoard,
    RewardConfig,
    RewardEvent,
    RuleCase,
    evaluate_reward,
    leaderboard,
    owner_of,
    ownership_board,
    register_user,
)
from .simulate import Scenario, SimReport, generate_events, run_simulation
from .snapshot import ApSummary, Snapshot, encode_snapshot, import_snapshot
from .store import AdvisoryStore, Event, EventKind, EventLog

__version__ = "0.1.0"

__all__ = [
    "AccessPoint",
    "AdvisoryError",
    "AdvisoryStore",
    "ApSource",
    "ApSummary",
    "BBox",
    "Cluster",
    "ContributionLedger",
    "Event",
    "EventKind",
    "EventLog",
    "ExternalHotspotRow",
    "GeoPoint",
    "NetMetrics",
    "OwnershipBoard",
    "PlaceTag",
    "Review",
    "RewardConfig",
    "RewardEvent",
    "RuleCase",
    "Scenario",
    "ServiceConfig",
    "SimReport",
    "Snapshot",
    "UserAccount",
    "canonicalize_bssid",
    "cluster_aps",
    "clusters_for_viewport",
    "encode_snapshot",
    "evaluate_reward",
    "generate_events",
    "haversine_m",
    "import_external_csv",
    "import_snapshot",
    "leaderboard",
    "load_config",
    "owner_of",
    "ownership_board",
    "register_user",
    "run_simulation",
    "submit_review",
    "validate_review",
    "__version__",
]
