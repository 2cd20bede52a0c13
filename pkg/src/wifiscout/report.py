"""Simulation report rendering: JSON, snapshot, and figures.

Writes a self-contained report directory for one simulation run:

  report.json             the SimReport
  snapshot.tsv            offline snapshot of the final store state
  reward_mix.png          events per reward rule case
  leaderboard.png         top contributors by points
  ownership_turnover.png  ownership changes per AP
  hotspot_map.png         AP positions, rating-colored, review-sized

Figures use the Agg backend; nothing here needs a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .simulate import SimReport
from .store import AdvisoryStore

_MAX_BARS = 20


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_reward_mix(report: SimReport, path: Path) -> None:
    cases = list(report.reward_histogram)
    events = [report.reward_histogram[c]["events"] for c in cases]
    points = [report.reward_histogram[c]["points"] for c in cases]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.bar(cases, events, color="#4878a8")
    ax1.set_ylabel("events")
    ax1.set_title("Reward events by rule case")
    ax1.tick_params(axis="x", rotation=30)
    ax2.bar(cases, points, color="#a85448")
    ax2.set_ylabel("points")
    ax2.set_title("Points by rule case")
    ax2.tick_params(axis="x", rotation=30)
    _save(fig, path)


def plot_leaderboard(report: SimReport, path: Path) -> None:
    top = report.leaderboard[:_MAX_BARS]
    names = [user_id for user_id, _ in top]
    points = [p for _, p in top]
    fig, ax = plt.subplots(figsize=(8, max(2.5, 0.4 * len(top) + 1)))
    ax.barh(range(len(top)), points, color="#48a878")
    ax.set_yticks(range(len(top)))
    ax.set_yticklabels(names)
    ax.invert_yaxis()  # rank 1 on top
    ax.set_xlabel("total points")
    ax.set_title(f"Leaderboard (top {len(top)})")
    _save(fig, path)


def plot_ownership_turnover(report: SimReport, path: Path) -> None:
    ranked = sorted(report.ownership_changes.items(), key=lambda kv: (-kv[1], kv[0]))
    top = ranked[:_MAX_BARS]
    fig, ax = plt.subplots(figsize=(8, max(2.5, 0.4 * len(top) + 1)))
    ax.barh(range(len(top)), [n for _, n in top], color="#8868a8")
    ax.set_yticks(range(len(top)))
    ax.set_yticklabels([ap_id for ap_id, _ in top], fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("ownership changes")
    ax.set_title("Most contested APs")
    _save(fig, path)


def plot_hotspot_map(store: AdvisoryStore, path: Path) -> None:
    summaries = store.all_summaries()
    lats = [s.ap.location.lat for s in summaries]
    lons = [s.ap.location.lon for s in summaries]
    ratings = [s.mean_rating if s.mean_rating is not None else 0.0 for s in summaries]
    sizes = [20 + 12 * s.review_count for s in summaries]
    fig, ax = plt.subplots(figsize=(7, 6))
    scatter = ax.scatter(lons, lats, c=ratings, s=sizes, cmap="RdYlGn", vmin=0, vmax=5, alpha=0.8)
    fig.colorbar(scatter, ax=ax, label="mean rating (0 = unrated)")
    ax.set_xlabel("lon")
    ax.set_ylabel("lat")
    ax.set_title(f"Hotspots ({len(summaries)} APs, marker size = reviews)")
    _save(fig, path)


def write_report(report: SimReport, store: AdvisoryStore, out_dir: str | Path) -> list[Path]:
    """Render everything into out_dir; returns the files written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out / "report.json"
    json_path.write_text(report.to_json() + "\n", encoding="utf-8")
    written.append(json_path)

    snap_path = out / "snapshot.tsv"
    snap_path.write_bytes(store.export_snapshot())
    written.append(snap_path)

    for name, fn in (
        ("reward_mix.png", lambda p: plot_reward_mix(report, p)),
        ("leaderboard.png", lambda p: plot_leaderboard(report, p)),
        ("ownership_turnover.png", lambda p: plot_ownership_turnover(report, p)),
        ("hotspot_map.png", lambda p: plot_hotspot_map(store, p)),
    ):
        fig_path = out / name
        fn(fig_path)
        written.append(fig_path)
    return written
