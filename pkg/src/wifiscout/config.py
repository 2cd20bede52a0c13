"""Service configuration.

Loaded from a small YAML (or JSON, which YAML subsumes) mapping. Keys:

  starting_points           points granted at registration (default 0)
  full_reward               points for a first review (default 10, even)
  interval_threshold_secs   spacing threshold T in seconds (default 21600)
  cluster_radius_m          radius for non-viewport clustering (default 100.0)
  port                      HTTP port (default 8080)
  data_dir                  event-log directory (default ./data)

Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

from .rewards import (
    DEFAULT_FULL_REWARD,
    DEFAULT_INTERVAL_THRESHOLD_SECS,
    DEFAULT_STARTING_POINTS,
    RewardConfig,
)

DEFAULT_CLUSTER_RADIUS_M = 100.0
DEFAULT_PORT = 8080
DEFAULT_DATA_DIR = "data"

_KEYS = {
    "starting_points",
    "full_reward",
    "interval_threshold_secs",
    "cluster_radius_m",
    "port",
    "data_dir",
}


@dataclass(frozen=True)
class ServiceConfig:
    starting_points: int = DEFAULT_STARTING_POINTS
    full_reward: int = DEFAULT_FULL_REWARD
    interval_threshold_secs: int = DEFAULT_INTERVAL_THRESHOLD_SECS
    cluster_radius_m: float = DEFAULT_CLUSTER_RADIUS_M
    port: int = DEFAULT_PORT
    data_dir: str = DEFAULT_DATA_DIR

    def reward_config(self) -> RewardConfig:
        return RewardConfig(
            starting_points=self.starting_points,
            full_reward=self.full_reward,
            interval_threshold_secs=self.interval_threshold_secs,
        )

    def __post_init__(self) -> None:
        self.reward_config()  # reuse its range checks
        if not isinstance(self.cluster_radius_m, (int, float)) or self.cluster_radius_m <= 0:
            raise ValueError(f"cluster_radius_m must be positive: {self.cluster_radius_m!r}")
        if not isinstance(self.port, int) or not (1 <= self.port <= 65535):
            raise ValueError(f"port must be in [1, 65535]: {self.port!r}")


def load_config(path: str | Path | None) -> ServiceConfig:
    """Read a config file; None yields all defaults."""
    if path is None:
        return ServiceConfig()
    raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValueError(f"config must be a mapping, got {type(raw).__name__}")
    unknown = set(raw) - _KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return ServiceConfig(**raw)
