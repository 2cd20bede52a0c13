"""Command line surface.

  wifiscout serve     run the HTTP service over a persistent store
  wifiscout import    load an external hotspot CSV into the store
  wifiscout simulate  run a deterministic crowd simulation

``simulate`` with no crowd-shape flags runs the scripted overtaking
demo; passing any of --users/--aps/--days switches to a seeded random
crowd. --report-dir renders figures and the snapshot next to the JSON
report.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .config import ServiceConfig, load_config
from .errors import MalformedHeader
from .ingest import import_external_csv
from .rewards import RewardConfig
from .simulate import Scenario, overtaking_script, run_with_store
from .store import AdvisoryStore, write_log_file


@click.group()
def main() -> None:
    """Crowdsensed WiFi advisory platform."""


def _load(config_path: str | None, port: int | None, data_dir: str | None) -> ServiceConfig:
    cfg = load_config(config_path)
    overrides = {}
    if port is not None:
        overrides["port"] = port
    if data_dir is not None:
        overrides["data_dir"] = data_dir
    if overrides:
        cfg = ServiceConfig(
            starting_points=cfg.starting_points,
            full_reward=cfg.full_reward,
            interval_threshold_secs=cfg.interval_threshold_secs,
            cluster_radius_m=cfg.cluster_radius_m,
            port=overrides.get("port", cfg.port),
            data_dir=overrides.get("data_dir", cfg.data_dir),
        )
    return cfg


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--port", type=int, default=None, help="Overrides the config file port.")
@click.option("--data-dir", type=click.Path(file_okay=False), default=None)
@click.option("--ui-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Static files to serve at / (the web client build).")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(config_path: str | None, port: int | None, data_dir: str | None,
          ui_dir: str | None, host: str) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .api import create_app

    cfg = _load(config_path, port, data_dir)
    store = AdvisoryStore.open(cfg.data_dir, cfg.reward_config())
    app = create_app(store, ui_dir=ui_dir)
    click.echo(f"serving on {host}:{cfg.port} (data under {cfg.data_dir})")
    uvicorn.run(app, host=host, port=cfg.port, log_level="warning")


@main.command(name="import")
@click.argument("csv_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--data-dir", type=click.Path(file_okay=False), default=None)
def import_cmd(csv_file: str, config_path: str | None, data_dir: str | None) -> None:
    """Import an external hotspot CSV (header: ssid,lat,lon,street_address,floor,room,operator)."""
    cfg = _load(config_path, None, data_dir)
    store = AdvisoryStore.open(cfg.data_dir, cfg.reward_config())
    try:
        imported, errors = import_external_csv(store, Path(csv_file).read_bytes())
    except MalformedHeader as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    finally:
        store.close()
    for line_no, reason in errors:
        click.echo(f"line {line_no}: {reason}", err=True)
    click.echo(f"imported={imported} errors={len(errors)}")


@main.command()
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--users", type=int, default=None, help="Crowd size (random scenario).")
@click.option("--aps", type=int, default=None, help="AP count (random scenario).")
@click.option("--days", type=int, default=None, help="Simulated days (random scenario).")
@click.option("--rate", type=float, default=3.0, show_default=True,
              help="Mean reviews per user per day.")
@click.option("--scenario", "scenario_kind", type=click.Choice(["auto", "overtaking", "random"]),
              default="auto", show_default=True)
@click.option("--starting-points", type=int, default=0, show_default=True)
@click.option("--full-reward", type=int, default=10, show_default=True)
@click.option("--threshold-secs", type=int, default=21600, show_default=True,
              help="Reward spacing threshold T; 0 disables suppression.")
@click.option("--report-dir", type=click.Path(file_okay=False), default=None,
              help="Write report.json, snapshot.tsv, and figures here.")
@click.option("--log-file", type=click.Path(dir_okay=False), default=None,
              help="Write the replayable event log here.")
def simulate(seed: int, users: int | None, aps: int | None, days: int | None, rate: float,
             scenario_kind: str, starting_points: int, full_reward: int, threshold_secs: int,
             report_dir: str | None, log_file: str | None) -> None:
    """Run a deterministic simulation and print its JSON report."""
    reward_config = RewardConfig(
        starting_points=starting_points,
        full_reward=full_reward,
        interval_threshold_secs=threshold_secs,
    )
    if scenario_kind == "auto":
        scenario_kind = "random" if any(v is not None for v in (users, aps, days)) else "overtaking"
    if scenario_kind == "overtaking":
        scenario = Scenario(seed=seed, n_users=2, n_aps=1, duration_days=3)
        report, store = run_with_store(
            scenario, events=overtaking_script(), reward_config=reward_config, mode="overtaking"
        )
    else:
        scenario = Scenario(
            seed=seed,
            n_users=users if users is not None else 5,
            n_aps=aps if aps is not None else 10,
            duration_days=days if days is not None else 7,
            reviews_per_user_per_day=rate,
        )
        report, store = run_with_store(scenario, reward_config=reward_config, mode="random")

    if log_file is not None:
        write_log_file(store.events, log_file)
    if report_dir is not None:
        from .report import write_report

        for path in write_report(report, store, report_dir):
            click.echo(f"wrote {path}", err=True)
    click.echo(report.to_json())
