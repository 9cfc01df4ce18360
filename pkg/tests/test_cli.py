"""CLI and pipeline behavior over a small fixture workspace."""

import json
from pathlib import Path

import pytest

from crewlens.cli import main
from crewlens.workspace import MANIFEST

ARTIFACTS = [
    "facts.jsonl",
    "identities.json",
    "series.json",
    "langmatrix.csv",
    "devdocs.json",
    "activity_clusters.csv",
    "activity_clusters.svg",
    "experience_clusters.csv",
    "experience_clusters.svg",
    "topics.json",
    "topic_terms.csv",
    "agreement.json",
    "topic_teams.csv",
    "activity.svg",
    "experience.svg",
]


def make_workspace(tmp_path, name, team_map=True, seed=0):
    ws = tmp_path / name
    ws.mkdir()
    rc = main(["--workspace", str(ws), "--seed", str(seed), "synth",
               "--teams", "3", "--devs", "4", "--days", "60"])
    assert rc == 0
    config = ws / "config.yml"
    lines = [
        f"seed: {seed}",
        "fixtures: [synth_facts.jsonl]",
        "topics: {n_topics: 3}",
        "report: {trials: 200" + (", team_map: synth_teams.yml}" if team_map else "}"),
    ]
    config.write_text("\n".join(lines) + "\n")
    return ws, config


def read_all(ws: Path) -> dict[str, bytes]:
    return {name: (ws / name).read_bytes() for name in ARTIFACTS}


def test_run_fixture_workspace_produces_all_artifacts(tmp_path):
    ws, config = make_workspace(tmp_path, "w")
    rc = main(["--workspace", str(ws), "--config", str(config), "run"])
    assert rc == 0
    for name in ARTIFACTS:
        assert (ws / name).exists(), name
    manifest = json.loads((ws / MANIFEST).read_text())
    assert set(manifest["stages"]) >= {"ingest", "identities", "features", "report"}


def test_missing_team_map_still_succeeds(tmp_path):
    ws, config = make_workspace(tmp_path, "w", team_map=False)
    rc = main(["--workspace", str(ws), "--config", str(config), "run"])
    assert rc == 0
    table = (ws / "topic_teams.csv").read_text()
    teams = {line.split(",")[1] for line in table.splitlines()[1:] if line}
    assert teams == {"(external)"}


def test_unreadable_repo_fails_naming_it(tmp_path, capsys):
    ws = tmp_path / "w"
    ws.mkdir()
    config = ws / "config.yml"
    config.write_text("repos: [/definitely/not/a/repo]\n")
    rc = main(["--workspace", str(ws), "--config", str(config), "run"])
    assert rc != 0
    err = capsys.readouterr().err
    assert "ingest" in err
    assert "/definitely/not/a/repo" in err


def test_determinism_byte_identical(tmp_path):
    ws1, config1 = make_workspace(tmp_path, "w1", seed=11)
    ws2, config2 = make_workspace(tmp_path, "w2", seed=11)
    assert main(["--workspace", str(ws1), "--config", str(config1), "run"]) == 0
    assert main(["--workspace", str(ws2), "--config", str(config2), "run"]) == 0
    assert read_all(ws1) == read_all(ws2)


def test_stage_isolation_reproduces_deleted_outputs(tmp_path):
    ws, config = make_workspace(tmp_path, "w", seed=3)
    assert main(["--workspace", str(ws), "--config", str(config), "run"]) == 0
    before = read_all(ws)
    for name in ("experience_clusters.csv", "experience_clusters.svg"):
        (ws / name).unlink()
    rc = main(["--workspace", str(ws), "--config", str(config), "cluster-experience"])
    assert rc == 0
    assert read_all(ws) == before


def test_single_stage_requires_prerequisites(tmp_path, capsys):
    ws = tmp_path / "w"
    ws.mkdir()
    rc = main(["--workspace", str(ws), "topics"])
    assert rc != 0


def test_flag_overrides_apply(tmp_path):
    ws, config = make_workspace(tmp_path, "w", seed=5)
    assert main(["--workspace", str(ws), "--config", str(config), "ingest"]) == 0
    assert main(["--workspace", str(ws), "--config", str(config), "identities"]) == 0
    assert main(["--workspace", str(ws), "--config", str(config), "features"]) == 0
    rc = main([
        "--workspace", str(ws), "--config", str(config),
        "cluster-activity", "--eps", "0.5", "--min-pts", "2",
    ])
    assert rc == 0
    manifest = json.loads((ws / MANIFEST).read_text())
    meta = manifest["stages"]["cluster-activity"]["meta"]
    assert meta["eps"] == 0.5
    assert meta["min_pts"] == 2
    assert meta["embedding"]["method"] == "classical-mds"


def test_config_errors_are_reported(tmp_path, capsys):
    ws = tmp_path / "w"
    ws.mkdir()
    config = ws / "config.yml"
    config.write_text("bogus_key: 1\n")
    rc = main(["--workspace", str(ws), "--config", str(config), "run"])
    assert rc != 0
    assert "bogus_key" in capsys.readouterr().err
