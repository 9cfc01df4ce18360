"""Join analysis outputs with the declared team map: topic-team tables, the
cluster/topic agreement metric with its permutation baseline, and plots."""

from __future__ import annotations

from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .errors import TeamMapError
from .identity import Identity
from .svgplot import cluster_colors, scatter_svg, team_colors
from .topics import TopicModel, main_topic

__all__ = [
    "EXTERNAL_TEAM",
    "AgreementReport",
    "load_team_map",
    "resolve_team",
    "topic_team_table",
    "cluster_agreement",
    "random_baseline",
    "render_scatter",
]

EXTERNAL_TEAM = "(external)"


@dataclass(frozen=True)
class AgreementReport:
    """Distinct-cluster counts per topic plus the random-permutation baseline."""

    per_topic: dict[int, int]
    mean_clusters_per_topic: float
    random_mean: float
    random_std: float
    trials: int
    averaging: str = "topic"


def load_team_map(path: str | Path) -> dict[str, str]:
    """Parse a list of {key, team} entries; duplicate keys are an error."""
    with open(path, encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if doc is None:
        return {}
    if not isinstance(doc, list):
        raise TeamMapError("team map must be a list of {key, team} entries")
    out: dict[str, str] = {}
    for entry in doc:
        if not isinstance(entry, dict) or set(entry) != {"key", "team"}:
            raise TeamMapError(f"bad team map entry: {entry!r}")
        key, team = str(entry["key"]), str(entry["team"])
        if not team:
            raise TeamMapError(f"empty team name for key {key!r}")
        if key in out:
            raise TeamMapError(f"duplicate team map key {key!r}")
        out[key] = team
    return out


def resolve_team(identity: Identity, team_map: Mapping[str, str]) -> str | None:
    """Match an identity to a team by email first, then by exact name."""
    for email in identity.emails:
        if email in team_map:
            return team_map[email]
    for name in identity.names:
        if name in team_map:
            return team_map[name]
    return None


def topic_team_table(
    model: TopicModel,
    identities: Sequence[Identity],
    team_map: Mapping[str, str],
) -> list[list[tuple[str, int]]]:
    """Per topic: the teams of developers whose main topic it is, with counts,
    sorted by frequency then team name. Unmapped developers are external."""
    by_id = {ident.id: ident for ident in identities}
    rows: list[Counter[str]] = [Counter() for _ in range(model.n_topics)]
    for ident_id in model.doc_ids:
        ident = by_id.get(ident_id)
        if ident is None:
            continue
        team = resolve_team(ident, team_map) or EXTERNAL_TEAM
        rows[main_topic(model, ident_id)][team] += 1
    return [
        sorted(row.items(), key=lambda kv: (-kv[1], kv[0]))
        for row in rows
    ]


def _topic_groups(
    main_topics: Mapping[int, int], labels: Mapping[int, int]
) -> dict[int, list[int]]:
    shared = sorted(set(main_topics) & set(labels))
    if not shared:
        raise ValueError("no identities shared between topics and clustering")
    groups: dict[int, list[int]] = {}
    for ident in shared:
        groups.setdefault(main_topics[ident], []).append(labels[ident])
    return groups


def agreement_mean(
    main_topics: Mapping[int, int],
    labels: Mapping[int, int],
    per: str = "topic",
) -> tuple[dict[int, int], float]:
    """Mean number of distinct clusters that each topic's developers land in.

    DBSCAN noise (-1) counts as one distinct cluster. per="developer" averages
    over developers instead of topics.
    """
    groups = _topic_groups(main_topics, labels)
    per_topic = {t: len(set(ls)) for t, ls in groups.items()}
    if per == "topic":
        mean = sum(per_topic.values()) / len(per_topic)
    elif per == "developer":
        total = sum(len(ls) for ls in groups.values())
        mean = sum(per_topic[t] * len(ls) for t, ls in groups.items()) / total
    else:
        raise ValueError(f"unknown averaging {per!r}")
    return per_topic, mean


def cluster_agreement(
    main_topics: Mapping[int, int],
    labels: Mapping[int, int],
    per: str = "topic",
) -> tuple[dict[int, int], float]:
    return agreement_mean(main_topics, labels, per)


def random_baseline(
    main_topics: Mapping[int, int],
    labels: Mapping[int, int],
    trials: int = 1000,
    seed: int = 0,
    per: str = "topic",
) -> tuple[float, float]:
    """Permute cluster labels over the shared identities (cluster sizes kept)
    and report the sample mean and standard deviation of the agreement mean."""
    shared = sorted(set(main_topics) & set(labels))
    if not shared:
        raise ValueError("no identities shared between topics and clustering")
    label_values = np.array([labels[i] for i in shared])
    rng = np.random.default_rng(seed)
    means = np.empty(trials)
    for t in range(trials):
        permuted = label_values[rng.permutation(len(shared))]
        shuffled = {ident: int(permuted[i]) for i, ident in enumerate(shared)}
        _, means[t] = agreement_mean(main_topics, shuffled, per)
    std = float(means.std(ddof=1)) if trials > 1 else 0.0
    return float(means.mean()), std


def build_agreement_report(
    main_topics: Mapping[int, int],
    labels: Mapping[int, int],
    trials: int = 1000,
    seed: int = 0,
    per: str = "topic",
) -> AgreementReport:
    per_topic, mean = agreement_mean(main_topics, labels, per)
    rmean, rstd = random_baseline(main_topics, labels, trials=trials, seed=seed, per=per)
    return AgreementReport(
        per_topic=per_topic,
        mean_clusters_per_topic=mean,
        random_mean=rmean,
        random_std=rstd,
        trials=trials,
        averaging=per,
    )


def render_scatter(
    coords: np.ndarray,
    labels: Sequence[int],
    teams: Sequence[str],
    path: str | Path,
    title: str = "contributors",
) -> None:
    """Write one SVG with two panels: colored by cluster and by team."""
    coords = np.asarray(coords, dtype=float)
    if len(coords) != len(labels) or len(coords) != len(teams):
        raise ValueError("coords, labels and teams must have equal length")
    svg = scatter_svg(
        coords,
        [
            (f"{title}: clusters", list(labels), cluster_colors(labels)),
            (f"{title}: teams", list(teams), team_colors(teams)),
        ],
    )
    Path(path).write_text(svg, encoding="utf-8")
