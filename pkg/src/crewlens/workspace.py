"""Workspace directory: artifact paths and an atomically updated manifest."""

from __future__ import annotations

import hashlib
import json
import os
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

__all__ = ["Workspace", "derive_seed"]

FACTS = "facts.jsonl"
IDENTITIES = "identities.json"
SERIES = "series.json"
LANGMATRIX = "langmatrix.csv"
DEVDOCS = "devdocs.json"
ACTIVITY_CSV = "activity_clusters.csv"
ACTIVITY_PLOT = "activity_clusters.svg"
EXPERIENCE_CSV = "experience_clusters.csv"
EXPERIENCE_PLOT = "experience_clusters.svg"
TOPICS = "topics.json"
TOPIC_TERMS = "topic_terms.csv"
AGREEMENT = "agreement.json"
TOPIC_TEAMS = "topic_teams.csv"
ACTIVITY_SVG = "activity.svg"
EXPERIENCE_SVG = "experience.svg"
SYNTH_FACTS = "synth_facts.jsonl"
SYNTH_TEAMS = "synth_teams.yml"
MANIFEST = "manifest.json"


def derive_seed(master: int, label: str) -> int:
    """Stable per-component seed stream from the single master seed."""
    digest = hashlib.sha256(f"{master}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class Workspace:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        return self.root / name

    def write_text(self, name: str, text: str) -> Path:
        p = self.path(name)
        p.write_text(text, encoding="utf-8")
        return p

    def write_json(self, name: str, payload) -> Path:
        return self.write_text(name, json.dumps(payload, indent=2, sort_keys=True) + "\n")

    def read_json(self, name: str):
        with open(self.path(name), encoding="utf-8") as fh:
            return json.load(fh)

    def record_stage(
        self, stage: str, artifacts: list[str], seed: int, config_hash: str, meta: dict | None = None
    ) -> None:
        """Read-modify-write the manifest via a temp file and atomic rename."""
        manifest_path = self.path(MANIFEST)
        if manifest_path.exists():
            with open(manifest_path, encoding="utf-8") as fh:
                manifest = json.load(fh)
        else:
            manifest = {"version": __version__, "stages": {}}
        manifest["version"] = __version__
        manifest["seed"] = seed
        manifest["config_hash"] = config_hash
        manifest["stages"][stage] = {
            "completed_at": datetime.now(timezone.utc).isoformat(),
            "artifacts": sorted(artifacts),
            "meta": meta or {},
        }
        tmp = manifest_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        os.replace(tmp, manifest_path)
