"""Synthetic organization generator: a desk-scale stand-in corpus with known
team structure, emitted in the commit-facts format plus a team-map sidecar.

Teams are separable in all three feature spaces: each team has a distinct
commit-activity envelope over time, a distinct language mix, and a distinct
identifier vocabulary with ownership concentrated in its members.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .facts import save_commit_facts
from .records import CommitRecord, FileChange, ScanResult, signature_key

__all__ = ["SyntheticOrgSpec", "generate_synthetic_org"]

SECONDS_PER_DAY = 86400

_LANG_POOL = (
    ("Ruby", "rb"),
    ("Go", "go"),
    ("JavaScript", "js"),
    ("Python", "py"),
    ("C", "c"),
    ("Java", "java"),
    ("Rust", "rs"),
    ("Kotlin", "kt"),
    ("Swift", "swift"),
    ("PHP", "php"),
)

_WORDS = (
    "pipeline", "compile", "deploy", "cluster", "widget", "render", "payment",
    "ledger", "invoice", "schema", "buffer", "socket", "thread", "worker",
    "queue", "cache", "token", "session", "cookie", "router", "handler",
    "template", "layout", "style", "button", "dialog", "canvas", "sprite",
    "shader", "vertex", "matrix", "tensor", "gradient", "sample", "batch",
    "epoch", "metric", "logger", "tracer", "probe", "sensor", "signal",
    "filter", "kernel", "driver", "device", "memory", "heap", "stack",
    "branch", "commit", "merge", "rebase", "clone", "fetch", "push",
    "parser", "lexer", "grammar", "symbol", "scope", "closure", "lambda",
    "struct", "record", "column", "index", "query", "cursor", "transaction",
    "storage", "bucket", "object", "stream", "chunk", "packet", "frame",
    "window", "panel", "screen", "pixel", "glyph", "font", "theme",
    "account", "profile", "avatar", "badge", "notify", "message", "inbox",
    "search", "ranking", "facet", "snippet", "crawler", "scraper", "feed",
    "backup", "restore", "archive", "snapshot", "mirror", "replica", "shard",
    "monitor", "alert", "incident", "oncall", "runbook", "deployment",
)


@dataclass(frozen=True)
class SyntheticOrgSpec:
    """Shape of the planted organization."""

    n_teams: int = 3
    devs_per_team: int = 5
    days: int = 120
    seed: int = 0
    base_rate: float = 6.0  # mean commits/day on a team's active days
    files_per_team: int = 8
    vocab_per_team: int = 25

    def __post_init__(self) -> None:
        if min(self.n_teams, self.devs_per_team, self.days) < 1:
            raise ValueError("n_teams, devs_per_team and days must be >= 1")


def _duty_cycle(team: int, day: int) -> float:
    """Per-team work rhythm: team t works 1 block in every (1 + t % 4).

    Mean normalization turns duty cycles into distinct peak heights, which
    time warping cannot align away, so DTW separates the teams while still
    absorbing phase jitter within a team.
    """
    denom = (1, 2, 4, 6)[team % 4]
    return 1.0 if (day // 3) % denom == 0 else 0.0


def _team_word(team: int, i: int, vocab_per_team: int) -> str:
    idx = team * vocab_per_team + i
    word = _WORDS[idx % len(_WORDS)]
    if idx >= len(_WORDS):
        word = f"{word}{idx // len(_WORDS)}"
    return word


def _commit_hash(seed: int, counter: int) -> str:
    return hashlib.sha1(f"synthorg:{seed}:{counter}".encode()).hexdigest()


def generate_synthetic_org(
    spec: SyntheticOrgSpec,
    facts_path: str | Path,
    teams_path: str | Path,
) -> tuple[Path, Path]:
    """Write the facts fixture and the ground-truth team sidecar; both byte
    deterministic for a fixed spec."""
    rng = np.random.default_rng(spec.seed)
    team_names = [f"Team {t:02d}" for t in range(spec.n_teams)]

    devs: list[tuple[int, str, str]] = []  # (team, name, email)
    for t in range(spec.n_teams):
        for i in range(spec.devs_per_team):
            devs.append(
                (t, f"Dev {t:02d}-{i:02d}", f"dev{t:02d}x{i:02d}@synth.example")
            )

    # per-team file pool: ~70% primary language, rest secondary
    team_files: list[list[tuple[str, str]]] = []
    for t in range(spec.n_teams):
        primary, p_ext = _LANG_POOL[(2 * t) % len(_LANG_POOL)]
        secondary, s_ext = _LANG_POOL[(2 * t + 1) % len(_LANG_POOL)]
        files = []
        n_primary = max(1, round(0.7 * spec.files_per_team))
        for i in range(spec.files_per_team):
            lang, ext = (primary, p_ext) if i < n_primary else (secondary, s_ext)
            files.append((f"team{t:02d}/src/mod{i:02d}.{ext}", lang))
        team_files.append(files)

    result = ScanResult(records=[])

    # snapshot: identifiers and ownership per file
    for t in range(spec.n_teams):
        vocab = [_team_word(t, i, spec.vocab_per_team) for i in range(spec.vocab_per_team)]
        members = [d for d in devs if d[0] == t]
        for i, (path, lang) in enumerate(team_files[t]):
            picks = rng.choice(len(vocab), size=min(10, len(vocab)), replace=False)
            bag = {vocab[int(p)]: int(rng.integers(1, 7)) for p in sorted(picks)}
            owners: list[str] = []
            for j in range(3):
                _, name, email = members[(i + j) % len(members)]
                owners.extend([signature_key(name, email)] * int(rng.integers(20, 81)))
            result.identifiers[path] = bag
            result.ownership[path] = owners
            result.languages[path] = lang

    # shared within-team day bursts: correlated deadlines, in effect
    bursts = rng.gamma(shape=6.0, scale=1.0 / 6.0, size=(spec.n_teams, spec.days))

    # commit stream: per-dev Poisson counts under the team rhythm
    counter = 0
    records: list[CommitRecord] = []
    for t, name, email in devs:
        factor = float(rng.uniform(0.75, 1.3))
        files = team_files[t]
        for day in range(spec.days):
            lam = spec.base_rate * factor * bursts[t, day] * _duty_cycle(t, day)
            for _ in range(int(rng.poisson(lam))):
                n_files = 1 + int(rng.integers(0, 2))
                file_idx = rng.integers(0, len(files), size=n_files)
                changes = []
                seen: set[str] = set()
                for fi in file_idx:
                    path, lang = files[int(fi)]
                    if path in seen:
                        continue
                    seen.add(path)
                    changes.append(
                        FileChange(
                            path=path,
                            language=lang,
                            lines_added=1 + int(rng.poisson(20)),
                            lines_deleted=int(rng.poisson(4)),
                            lines_modified=int(rng.poisson(9)),
                        )
                    )
                records.append(
                    CommitRecord(
                        repo="synthorg",
                        hash=_commit_hash(spec.seed, counter),
                        author_name=name,
                        author_email=email,
                        authored_at=day * SECONDS_PER_DAY
                        + 9 * 3600
                        + (counter * 137) % 21600,
                        parents=(),
                        changes=tuple(changes),
                    )
                )
                counter += 1
    records.sort(key=lambda r: (r.authored_at, r.hash))
    result.records = records

    facts_path = Path(facts_path)
    teams_path = Path(teams_path)
    save_commit_facts(result, facts_path)
    sidecar = [
        {"key": email, "team": team_names[t]} for t, _, email in sorted(devs, key=lambda d: d[2])
    ]
    teams_path.write_text(
        yaml.safe_dump(sidecar, sort_keys=True, default_flow_style=False),
        encoding="utf-8",
    )
    return facts_path, teams_path
