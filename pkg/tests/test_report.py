"""Report directory rendering: files, formats, and content fidelity."""

from __future__ import annotations

import json

from wifiscout.report import write_report
from wifiscout.simulate import Scenario, run_overtaking_demo, run_with_store
from wifiscout.snapshot import import_snapshot

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

EXPECTED_FILES = [
    "report.json",
    "snapshot.tsv",
    "reward_mix.png",
    "leaderboard.png",
    "ownership_turnover.png",
    "hotspot_map.png",
]


def test_write_report_produces_all_files(tmp_path):
    report, store = run_overtaking_demo()
    written = write_report(report, store, tmp_path / "out")
    assert [p.name for p in written] == EXPECTED_FILES
    for path in written:
        assert path.exists() and path.stat().st_size > 0


def test_figures_are_png(tmp_path):
    report, store = run_overtaking_demo()
    written = write_report(report, store, tmp_path)
    for path in written:
        if path.suffix == ".png":
            assert path.read_bytes()[:8] == PNG_MAGIC, path.name


def test_report_json_matches_to_dict(tmp_path):
    report, store = run_overtaking_demo()
    write_report(report, store, tmp_path)
    on_disk = json.loads((tmp_path / "report.json").read_text())
    assert on_disk == report.to_dict()


def test_snapshot_file_matches_store_export(tmp_path):
    report, store = run_with_store(Scenario(seed=5, n_users=4, n_aps=6, duration_days=3))
    write_report(report, store, tmp_path)
    data = (tmp_path / "snapshot.tsv").read_bytes()
    assert data == store.export_snapshot()
    parsed = import_snapshot(data)
    assert len(parsed.entries) == 6


def test_report_handles_empty_run(tmp_path):
    # a zero-user, zero-review run still renders every artifact
    report, store = run_with_store(Scenario(seed=5, n_users=0, n_aps=3, duration_days=1))
    written = write_report(report, store, tmp_path)
    assert [p.name for p in written] == EXPECTED_FILES


def test_out_dir_created_recursively(tmp_path):
    report, store = run_overtaking_demo()
    target = tmp_path / "a" / "b" / "c"
    write_report(report, store, target)
    assert (target / "report.json").exists()
