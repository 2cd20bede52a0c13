"""Independent reference implementations used to verify the engine.

Nothing here shares code paths with the package: the reward oracle
re-reads the whole action history per query, the clustering oracle does
the full O(n^2) pairwise matrix with numpy plus its own union-find, and
the distance reference uses the atan2 (Vincenty sphere) formulation
instead of the asin haversine.
"""

from __future__ import annotations

import math

import numpy as np

from wifiscout.clustering import haversine_m
from wifiscout.model import GeoPoint

EARTH_R = 6_371_000.0


def reference_distance_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance via the atan2 form (not the asin form)."""
    p1, l1, p2, l2 = map(math.radians, (lat1, lon1, lat2, lon2))
    dl = l2 - l1
    y = math.hypot(
        math.cos(p2) * math.sin(dl),
        math.cos(p1) * math.sin(p2) - math.sin(p1) * math.cos(p2) * math.cos(dl),
    )
    x = math.sin(p1) * math.sin(p2) + math.cos(p1) * math.cos(p2) * math.cos(dl)
    return EARTH_R * math.atan2(y, x)


class RewardOracle:
    """Brute-force reward accounting: every query rescans the history."""

    def __init__(self, starting_points: int = 0, full_reward: int = 10, threshold: int = 21600):
        self.r_s = starting_points
        self.r = full_reward
        self.t = threshold
        # ("register", user, at) or ("review", user, ap, at)
        self.history: list[tuple] = []

    def register(self, user: str, at: int) -> None:
        self.history.append(("register", user, at))

    def review(self, user: str, ap: str, at: int) -> None:
        self.history.append(("review", user, ap, at))

    # -- everything below recomputes from the full history ---------------

    def registered_at(self, user: str) -> int | None:
        for kind, u, at in (h for h in self.history if h[0] == "register"):
            if u == user:
                return at
        return None

    def pair_awards(self, user: str, ap: str) -> list[tuple[int, int]]:
        """(at, points) per review of this (user, AP) pair, from scratch."""
        times = [h[3] for h in self.history if h[0] == "review" and h[1] == user and h[2] == ap]
        awards: list[tuple[int, int]] = []
        prev: int | None = None
        for t in times:
            if prev is None:
                points = self.r
            elif t - prev >= self.t:
                points = self.r // 2
            else:
                points = 0
            awards.append((t, points))
            prev = t
        return awards

    def ap_score(self, user: str, ap: str) -> int:
        return sum(p for _, p in self.pair_awards(user, ap))

    def total_points(self, user: str) -> int:
        if self.registered_at(user) is None:
            return 0
        aps = {h[2] for h in self.history if h[0] == "review" and h[1] == user}
        return self.r_s + sum(self.ap_score(user, ap) for ap in aps)

    def owner(self, ap: str) -> str | None:
        users = {h[1] for h in self.history if h[0] == "review" and h[2] == ap}
        candidates = []
        for user in users:
            awards = self.pair_awards(user, ap)
            score = sum(p for _, p in awards)
            if score <= 0:
                continue
            # the score last changed at the most recent positive award
            attained = max(t for t, p in awards if p > 0)
            candidates.append((-score, attained, user))
        return min(candidates)[2] if candidates else None

    def leaderboard(self, n: int) -> list[tuple[str, int]]:
        users = [h[1] for h in self.history if h[0] == "register"]
        rows = sorted(
            ((u, self.total_points(u)) for u in users),
            key=lambda row: (-row[1], self.registered_at(row[0]), row[0]),
        )
        return rows[:n]


def brute_force_partition(
    points: list[tuple[str, float, float]], radius_m: float
) -> set[frozenset[str]]:
    """Single-linkage clusters via the full pairwise distance matrix.

    Distances are vectorized with numpy; any pair whose numpy distance
    sits within a millimeter of the radius is re-decided with the exact
    scalar kernel, so ulp-level libm differences cannot flip an edge.
    """
    n = len(points)
    if n == 0:
        return set()
    ids = [p[0] for p in points]
    lat = np.radians(np.array([p[1] for p in points], dtype=np.float64))
    lon = np.radians(np.array([p[2] for p in points], dtype=np.float64))
    dlat = lat[:, None] - lat[None, :]
    dlon = lon[:, None] - lon[None, :]
    h = np.sin(dlat / 2) ** 2 + np.cos(lat[:, None]) * np.cos(lat[None, :]) * np.sin(dlon / 2) ** 2
    dist = 2 * EARTH_R * np.arcsin(np.minimum(1.0, np.sqrt(h)))

    adjacent = dist <= radius_m
    borderline = np.abs(dist - radius_m) <= 1e-3
    for i, j in np.argwhere(np.triu(borderline, 1)):
        exact = haversine_m(GeoPoint(points[i][1], points[i][2]), GeoPoint(points[j][1], points[j][2]))
        adjacent[i, j] = adjacent[j, i] = exact <= radius_m

    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in np.argwhere(np.triu(adjacent, 1)):
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            parent[rj] = ri

    groups: dict[int, set[str]] = {}
    for k in range(n):
        groups.setdefault(find(k), set()).add(ids[k])
    return {frozenset(g) for g in groups.values()}
