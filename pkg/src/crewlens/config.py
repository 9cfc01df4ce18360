"""Run configuration: one document controlling inputs, language config and
the per-stage analysis parameters. Relative paths resolve against the
config file's directory."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .analytics import DtwParams
from .errors import ConfigError
from .langconfig import LanguageConfig
from .topics import TopicParams

__all__ = ["RunConfig", "load_config"]


@dataclass
class RunConfig:
    repos: list[str] = field(default_factory=list)
    fixtures: list[str] = field(default_factory=list)
    seed: int = 0
    language: LanguageConfig = field(default_factory=LanguageConfig)
    dtw: DtwParams = DtwParams()
    dbscan_eps: float | None = None  # None: knee of the k-dist curve
    dbscan_min_pts: int = 3
    kmeans_kmax: int = 10
    kmeans_restarts: int = 10
    kmeans_space: str = "embedding"  # or "original"
    percentile: float = 95.0
    topics: TopicParams = TopicParams()
    team_map: str | None = None
    trials: int = 1000
    per_developer: bool = False
    include_stubs: bool = False


def _section(doc: dict, name: str, allowed: set[str]) -> dict:
    raw = doc.get(name) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {name!r}: {sorted(unknown)}")
    return raw


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    allowed_top = {
        "repos", "fixtures", "seed", "language", "dtw", "dbscan",
        "kmeans", "features", "topics", "report",
    }
    unknown = set(doc) - allowed_top
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    base = path.parent

    def _resolve(p: str) -> str:
        return str((base / p).resolve()) if not Path(p).is_absolute() else p

    cfg = RunConfig()
    cfg.repos = [_resolve(str(p)) for p in doc.get("repos") or []]
    cfg.fixtures = [_resolve(str(p)) for p in doc.get("fixtures") or []]
    cfg.seed = int(doc.get("seed", 0))

    lang = doc.get("language")
    if lang is None:
        cfg.language = LanguageConfig()
    elif isinstance(lang, str):
        cfg.language = LanguageConfig.from_file(_resolve(lang))
    else:
        cfg.language = LanguageConfig.from_mapping(lang)

    dtw = _section(doc, "dtw", {"radius"})
    cfg.dtw = DtwParams(radius=int(dtw.get("radius", 1)))

    dbs = _section(doc, "dbscan", {"eps", "min_pts"})
    cfg.dbscan_eps = None if dbs.get("eps") is None else float(dbs["eps"])
    cfg.dbscan_min_pts = int(dbs.get("min_pts", 3))

    km = _section(doc, "kmeans", {"k_max", "restarts", "space"})
    cfg.kmeans_kmax = int(km.get("k_max", 10))
    cfg.kmeans_restarts = int(km.get("restarts", 10))
    cfg.kmeans_space = str(km.get("space", "embedding"))
    if cfg.kmeans_space not in ("embedding", "original"):
        raise ConfigError("kmeans.space must be 'embedding' or 'original'")

    feats = _section(doc, "features", {"percentile"})
    cfg.percentile = float(feats.get("percentile", 95.0))

    top = _section(
        doc,
        "topics",
        {"n_topics", "tau_decor", "beta_phi", "alpha_theta", "max_iters", "tol", "normalize_docs"},
    )
    cfg.topics = TopicParams(
        n_topics=int(top.get("n_topics", 10)),
        tau_decor=None if top.get("tau_decor") is None else float(top["tau_decor"]),
        beta_phi=float(top.get("beta_phi", -0.01)),
        alpha_theta=float(top.get("alpha_theta", -0.01)),
        max_iters=int(top.get("max_iters", 200)),
        tol=float(top.get("tol", 1e-6)),
        normalize_docs=bool(top.get("normalize_docs", False)),
    )

    rep = _section(doc, "report", {"team_map", "trials", "per_developer", "include_stubs"})
    cfg.team_map = _resolve(str(rep["team_map"])) if rep.get("team_map") else None
    cfg.trials = int(rep.get("trials", 1000))
    cfg.per_developer = bool(rep.get("per_developer", False))
    cfg.include_stubs = bool(rep.get("include_stubs", False))
    return cfg
