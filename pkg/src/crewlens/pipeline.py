"""Pipeline stages: each reads prior workspace artifacts, writes its own, and
records itself in the manifest. Stages re-derive identity resolution from the
facts artifact, so any stage can be rerun in isolation and reproduce its
outputs exactly."""

from __future__ import annotations

import csv
import hashlib
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import workspace as ws_names
from .analytics import (
    DbscanParams,
    dbscan,
    embed_2d,
    kmeans_best,
    pairwise_dtw,
    pairwise_l2,
    select_k_elbow,
    suggest_eps,
)
from .config import RunConfig
from .errors import ConfigError, CrewlensError
from .facts import load_commit_facts, save_commit_facts
from .features import (
    DailySeries,
    build_daily_series,
    build_developer_docs,
    build_file_tfidf,
    build_language_matrix,
    normalize_series,
    saturate,
)
from .gitscan import scan_repository
from .identity import Identity, merge_identities, signatures_from_records
from .records import ScanResult
from .report import (
    EXTERNAL_TEAM,
    build_agreement_report,
    load_team_map,
    render_scatter,
    resolve_team,
    topic_team_table,
)
from .svgplot import cluster_colors, scatter_svg
from .synth import SyntheticOrgSpec, generate_synthetic_org
from .topics import TopicModel, TopicParams, fit_topics, main_topic, top_terms
from .workspace import Workspace, derive_seed

__all__ = ["Pipeline", "STAGE_ORDER"]

STAGE_ORDER = (
    "ingest",
    "identities",
    "features",
    "cluster-activity",
    "cluster-experience",
    "topics",
    "report",
)


def _config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(repr(cfg).encode()).hexdigest()[:16]


def _fmt(x: float) -> str:
    return repr(float(x))


class Pipeline:
    def __init__(self, cfg: RunConfig, ws: Workspace):
        self.cfg = cfg
        self.ws = ws
        self._hash = _config_hash(cfg)

    # -- shared loaders ----------------------------------------------------

    def _load_facts(self) -> ScanResult:
        path = self.ws.path(ws_names.FACTS)
        if not path.exists():
            raise CrewlensError("facts artifact missing; run the ingest stage first")
        return load_commit_facts(path)

    def _identities(self, facts: ScanResult) -> tuple[list[Identity], dict[str, int]]:
        return merge_identities(signatures_from_records(facts.records), self.cfg.language)

    def _record(self, stage: str, artifacts: list[str], meta: dict | None = None) -> None:
        self.ws.record_stage(stage, artifacts, self.cfg.seed, self._hash, meta)

    def _write_cluster_csv(self, name: str, ids, labels, coords) -> None:
        with open(self.ws.path(name), "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["identity", "cluster", "x", "y"])
            for i, ident in enumerate(ids):
                writer.writerow(
                    [ident, int(labels[i]), _fmt(coords[i, 0]), _fmt(coords[i, 1])]
                )

    def _read_cluster_csv(self, name: str) -> tuple[list[int], dict[int, int], np.ndarray]:
        path = self.ws.path(name)
        if not path.exists():
            raise CrewlensError(f"artifact {name} missing; run its clustering stage first")
        ids: list[int] = []
        labels: dict[int, int] = {}
        coords: list[list[float]] = []
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                ident = int(row["identity"])
                ids.append(ident)
                labels[ident] = int(row["cluster"])
                coords.append([float(row["x"]), float(row["y"])])
        return ids, labels, np.array(coords)

    # -- stages ------------------------------------------------------------

    def stage_ingest(self) -> None:
        if not self.cfg.repos and not self.cfg.fixtures:
            raise ConfigError("no repos or fixtures configured; nothing to ingest")
        pooled = ScanResult(records=[])
        for fixture in self.cfg.fixtures:
            pooled.merge(load_commit_facts(fixture))
        for repo in self.cfg.repos:
            scan = scan_repository(repo, self.cfg.language)
            prefix = scan.records[0].repo if scan.records else Path(repo).resolve().name
            pooled.records.extend(scan.records)
            pooled.ownership.update({f"{prefix}/{p}": v for p, v in scan.ownership.items()})
            pooled.identifiers.update({f"{prefix}/{p}": v for p, v in scan.identifiers.items()})
            pooled.languages.update({f"{prefix}/{p}": v for p, v in scan.languages.items()})
        save_commit_facts(pooled, self.ws.path(ws_names.FACTS))
        self._record("ingest", [ws_names.FACTS], {"commits": len(pooled.records)})

    def stage_identities(self) -> None:
        facts = self._load_facts()
        identities, _ = self._identities(facts)
        payload = [
            {"id": i.id, "names": list(i.names), "emails": list(i.emails)}
            for i in identities
        ]
        self.ws.write_json(ws_names.IDENTITIES, payload)
        self._record("identities", [ws_names.IDENTITIES], {"identities": len(identities)})

    def stage_features(self) -> None:
        facts = self._load_facts()
        _, key_to_id = self._identities(facts)

        series = build_daily_series(facts.records, key_to_id)
        normalized = {i: normalize_series(s) for i, s in series.items()}
        self.ws.write_json(
            ws_names.SERIES,
            {
                str(i): {"start_day": s.start_day, "values": list(s.values)}
                for i, s in sorted(normalized.items())
            },
        )

        matrix = saturate(
            build_language_matrix(facts.records, key_to_id, self.cfg.language),
            self.cfg.percentile,
        )
        with open(self.ws.path(ws_names.LANGMATRIX), "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["identity"] + matrix.column_labels())
            for i, ident in enumerate(matrix.ids):
                writer.writerow([ident] + [_fmt(v) for v in matrix.values[i]])

        if facts.identifiers:
            tfidf = build_file_tfidf(facts.identifiers)
            docs = build_developer_docs(tfidf, facts.ownership, key_to_id)
        else:
            docs = {}
        self.ws.write_json(
            ws_names.DEVDOCS,
            {str(i): dict(sorted(doc.items())) for i, doc in sorted(docs.items())},
        )
        self._record(
            "features",
            [ws_names.SERIES, ws_names.LANGMATRIX, ws_names.DEVDOCS],
            {"series": len(normalized), "lang_rows": len(matrix.ids), "docs": len(docs)},
        )

    def stage_cluster_activity(self) -> None:
        raw = self.ws.read_json(ws_names.SERIES)
        if len(raw) < 2:
            raise CrewlensError("need at least 2 daily series to cluster activity")
        ids = sorted(int(k) for k in raw)
        series = [
            DailySeries(
                identity=i,
                start_day=int(raw[str(i)]["start_day"]),
                values=tuple(float(v) for v in raw[str(i)]["values"]),
            )
            for i in ids
        ]
        d = pairwise_dtw(series, self.cfg.dtw)
        eps = self.cfg.dbscan_eps
        if eps is None:
            eps = suggest_eps(d, self.cfg.dbscan_min_pts)
        labels = dbscan(d, DbscanParams(eps=eps, min_pts=self.cfg.dbscan_min_pts))
        emb = embed_2d(d)
        self._write_cluster_csv(ws_names.ACTIVITY_CSV, ids, labels, emb.coords)
        svg = scatter_svg(
            emb.coords,
            [("commit activity: clusters", [int(v) for v in labels], cluster_colors(labels))],
        )
        self.ws.write_text(ws_names.ACTIVITY_PLOT, svg)
        self._record(
            "cluster-activity",
            [ws_names.ACTIVITY_CSV, ws_names.ACTIVITY_PLOT],
            {
                "eps": eps,
                "min_pts": self.cfg.dbscan_min_pts,
                "radius": self.cfg.dtw.radius,
                "clusters": int(labels.max()) + 1 if (labels >= 0).any() else 0,
                "noise": int((labels == -1).sum()),
                "embedding": {
                    "method": "classical-mds",
                    "eigenvalues": list(emb.eigenvalues),
                    "clamped": emb.clamped,
                },
            },
        )

    def stage_cluster_experience(self) -> None:
        path = self.ws.path(ws_names.LANGMATRIX)
        if not path.exists():
            raise CrewlensError("langmatrix artifact missing; run the features stage first")
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        ids = [int(r[0]) for r in rows[1:]]
        values = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
        if len(ids) < 2:
            raise CrewlensError("need at least 2 language rows to cluster experience")
        d = pairwise_l2(values)
        emb = embed_2d(d)
        points = emb.coords if self.cfg.kmeans_space == "embedding" else values
        seed = derive_seed(self.cfg.seed, "cluster-experience")
        k = select_k_elbow(points, self.cfg.kmeans_kmax, seed, self.cfg.kmeans_restarts)
        result = kmeans_best(points, k, seed, self.cfg.kmeans_restarts)
        self._write_cluster_csv(ws_names.EXPERIENCE_CSV, ids, result.labels, emb.coords)
        svg = scatter_svg(
            emb.coords,
            [
                (
                    "language experience: clusters",
                    [int(v) for v in result.labels],
                    cluster_colors(result.labels),
                )
            ],
        )
        self.ws.write_text(ws_names.EXPERIENCE_PLOT, svg)
        self._record(
            "cluster-experience",
            [ws_names.EXPERIENCE_CSV, ws_names.EXPERIENCE_PLOT],
            {
                "k": k,
                "space": self.cfg.kmeans_space,
                "wcss": result.wcss,
                "embedding": {
                    "method": "classical-mds",
                    "eigenvalues": list(emb.eigenvalues),
                    "clamped": emb.clamped,
                },
            },
        )

    def stage_topics(self) -> None:
        raw = self.ws.read_json(ws_names.DEVDOCS)
        docs = {
            int(ident): {t: float(w) for t, w in doc.items()} for ident, doc in raw.items()
        }
        params = replace(self.cfg.topics, seed=derive_seed(self.cfg.seed, "topics"))
        model = fit_topics(docs, params)
        self.ws.write_json(
            ws_names.TOPICS,
            {
                "vocabulary": model.vocabulary,
                "doc_ids": model.doc_ids,
                "phi": [[float(v) for v in row] for row in model.phi],
                "theta": [[float(v) for v in row] for row in model.theta],
                "log_likelihood": model.log_likelihood,
                "iterations": model.iterations,
                "trace": model.trace,
                "tau_decor": model.tau_decor,
                "collapsed_topics": model.collapsed_topics,
                "params": {
                    "n_topics": params.n_topics,
                    "beta_phi": params.beta_phi,
                    "alpha_theta": params.alpha_theta,
                    "max_iters": params.max_iters,
                    "tol": params.tol,
                    "normalize_docs": params.normalize_docs,
                },
            },
        )
        with open(self.ws.path(ws_names.TOPIC_TERMS), "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["topic", "rank", "term", "score"])
            for t in range(model.n_topics):
                for rank, (term, score) in enumerate(top_terms(model, t, 10), start=1):
                    writer.writerow([t, rank, term, _fmt(score)])
        self._record(
            "topics",
            [ws_names.TOPICS, ws_names.TOPIC_TERMS],
            {"iterations": model.iterations, "log_likelihood": model.log_likelihood},
        )

    def _load_topic_model(self) -> TopicModel:
        path = self.ws.path(ws_names.TOPICS)
        if not path.exists():
            raise CrewlensError("topics artifact missing; run the topics stage first")
        raw = self.ws.read_json(ws_names.TOPICS)
        params = TopicParams(
            n_topics=int(raw["params"]["n_topics"]),
            beta_phi=float(raw["params"]["beta_phi"]),
            alpha_theta=float(raw["params"]["alpha_theta"]),
        )
        return TopicModel(
            vocabulary=list(raw["vocabulary"]),
            doc_ids=[int(i) for i in raw["doc_ids"]],
            phi=np.array(raw["phi"]),
            theta=np.array(raw["theta"]),
            log_likelihood=float(raw["log_likelihood"]),
            iterations=int(raw["iterations"]),
            trace=[float(v) for v in raw["trace"]],
            tau_decor=float(raw["tau_decor"]),
            params=params,
            collapsed_topics=[int(t) for t in raw["collapsed_topics"]],
        )

    def stage_report(self) -> None:
        facts = self._load_facts()
        identities, _ = self._identities(facts)
        team_map = load_team_map(self.cfg.team_map) if self.cfg.team_map else {}
        for ident in identities:
            ident.team = resolve_team(ident, team_map)
        keep = {
            i.id for i in identities if self.cfg.include_stubs or not i.stub
        }
        by_id = {i.id: i for i in identities}

        model = self._load_topic_model()
        main_topics = {
            ident: main_topic(model, ident) for ident in model.doc_ids if ident in keep
        }

        table = topic_team_table(model, identities, team_map)
        with open(self.ws.path(ws_names.TOPIC_TEAMS), "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["topic", "team", "count"])
            for t, row in enumerate(table):
                for team, count in row:
                    writer.writerow([t, team, count])

        payload: dict = {"averaging": "developer" if self.cfg.per_developer else "topic"}
        per = payload["averaging"]
        for kind, csv_name, svg_name in (
            ("activity", ws_names.ACTIVITY_CSV, ws_names.ACTIVITY_SVG),
            ("experience", ws_names.EXPERIENCE_CSV, ws_names.EXPERIENCE_SVG),
        ):
            ids, labels, coords = self._read_cluster_csv(csv_name)
            kept_rows = [i for i, ident in enumerate(ids) if ident in keep]
            ids_k = [ids[i] for i in kept_rows]
            labels_k = {i: labels[i] for i in ids_k}
            coords_k = coords[kept_rows]
            report = build_agreement_report(
                main_topics,
                labels_k,
                trials=self.cfg.trials,
                seed=derive_seed(self.cfg.seed, f"baseline-{kind}"),
                per=per,
            )
            payload[kind] = {
                "per_topic": {str(t): c for t, c in sorted(report.per_topic.items())},
                "mean_clusters_per_topic": report.mean_clusters_per_topic,
                "random_mean": report.random_mean,
                "random_std": report.random_std,
                "trials": report.trials,
            }
            teams = [
                (by_id[i].team or EXTERNAL_TEAM) for i in ids_k
            ]
            render_scatter(
                coords_k,
                [labels_k[i] for i in ids_k],
                teams,
                self.ws.path(svg_name),
                title=f"{kind}",
            )
        self.ws.write_json(ws_names.AGREEMENT, payload)
        self._record(
            "report",
            [ws_names.AGREEMENT, ws_names.TOPIC_TEAMS, ws_names.ACTIVITY_SVG, ws_names.EXPERIENCE_SVG],
            {"teams": len(set(team_map.values())), "mapped": sum(1 for i in identities if i.team)},
        )

    def stage_synth(self, spec: SyntheticOrgSpec) -> None:
        generate_synthetic_org(
            spec,
            self.ws.path(ws_names.SYNTH_FACTS),
            self.ws.path(ws_names.SYNTH_TEAMS),
        )
        self._record(
            "synth",
            [ws_names.SYNTH_FACTS, ws_names.SYNTH_TEAMS],
            {"teams": spec.n_teams, "devs": spec.n_teams * spec.devs_per_team, "days": spec.days},
        )

    def run(self) -> None:
        for stage in STAGE_ORDER:
            self.run_stage(stage)

    def run_stage(self, stage: str) -> None:
        fn = {
            "ingest": self.stage_ingest,
            "identities": self.stage_identities,
            "features": self.stage_features,
            "cluster-activity": self.stage_cluster_activity,
            "cluster-experience": self.stage_cluster_experience,
            "topics": self.stage_topics,
            "report": self.stage_report,
        }[stage]
        fn()
