"""Command line entry point: pipeline stages as subcommands over a shared
workspace directory."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .analytics import DtwParams
from .config import RunConfig, load_config
from .errors import CrewlensError
from .pipeline import Pipeline, STAGE_ORDER
from .synth import SyntheticOrgSpec
from .topics import TopicParams
from .workspace import Workspace


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crewlens",
        description="Mine Git histories to recover de-facto engineering structure.",
    )
    parser.add_argument("--workspace", required=True, help="artifact directory")
    parser.add_argument("--config", help="run configuration file (YAML)")
    parser.add_argument("--seed", type=int, help="override the config seed")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ingest", help="scan repos/fixtures into the facts artifact")
    sub.add_parser("identities", help="merge signatures into identities")

    features = sub.add_parser("features", help="build the three feature spaces")
    features.add_argument("--percentile", type=float, help="saturation percentile")

    activity = sub.add_parser("cluster-activity", help="DTW + DBSCAN over daily series")
    activity.add_argument("--eps", type=float, help="DBSCAN eps (default: knee rule)")
    activity.add_argument("--min-pts", type=int, help="DBSCAN min_pts")
    activity.add_argument("--radius", type=int, help="FastDTW radius")

    experience = sub.add_parser("cluster-experience", help="L2 + K-Means over language rows")
    experience.add_argument("--kmax", type=int, help="largest k for the elbow rule")
    experience.add_argument(
        "--original-space",
        action="store_true",
        help="run K-Means on the raw language rows instead of the 2D embedding",
    )

    topics = sub.add_parser("topics", help="fit the identifier topic model")
    topics.add_argument("--n-topics", type=int)
    topics.add_argument("--tau-decor", type=float)
    topics.add_argument("--beta-phi", type=float)
    topics.add_argument("--alpha-theta", type=float)
    topics.add_argument("--max-iters", type=int)
    topics.add_argument("--tol", type=float)
    topics.add_argument("--normalize-docs", action="store_true")

    report = sub.add_parser("report", help="team tables, agreement metric, plots")
    report.add_argument("--team-map", help="declared team map file")
    report.add_argument("--trials", type=int, help="random baseline trials")
    report.add_argument(
        "--per-developer",
        action="store_true",
        help="average agreement over developers instead of topics",
    )
    report.add_argument("--include-stubs", action="store_true")

    synth = sub.add_parser("synth", help="generate a synthetic organization fixture")
    synth.add_argument("--teams", type=int, default=3)
    synth.add_argument("--devs", type=int, default=5)
    synth.add_argument("--days", type=int, default=120)

    sub.add_parser("run", help="execute all stages in order")
    return parser


def _apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    if args.seed is not None:
        cfg.seed = args.seed
    if getattr(args, "percentile", None) is not None:
        cfg.percentile = args.percentile
    if getattr(args, "eps", None) is not None:
        cfg.dbscan_eps = args.eps
    if getattr(args, "min_pts", None) is not None:
        cfg.dbscan_min_pts = args.min_pts
    if getattr(args, "radius", None) is not None:
        cfg.dtw = DtwParams(radius=args.radius)
    if getattr(args, "kmax", None) is not None:
        cfg.kmeans_kmax = args.kmax
    if getattr(args, "original_space", False):
        cfg.kmeans_space = "original"
    topic_fields = {
        "n_topics": getattr(args, "n_topics", None),
        "tau_decor": getattr(args, "tau_decor", None),
        "beta_phi": getattr(args, "beta_phi", None),
        "alpha_theta": getattr(args, "alpha_theta", None),
        "max_iters": getattr(args, "max_iters", None),
        "tol": getattr(args, "tol", None),
    }
    updates = {k: v for k, v in topic_fields.items() if v is not None}
    if getattr(args, "normalize_docs", False):
        updates["normalize_docs"] = True
    if updates:
        cfg.topics = replace(cfg.topics, **updates)
    if getattr(args, "team_map", None) is not None:
        cfg.team_map = args.team_map
    if getattr(args, "trials", None) is not None:
        cfg.trials = args.trials
    if getattr(args, "per_developer", False):
        cfg.per_developer = True
    if getattr(args, "include_stubs", False):
        cfg.include_stubs = True
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = _apply_overrides(cfg, args)
        ws = Workspace(args.workspace)
        pipe = Pipeline(cfg, ws)
        if args.command == "synth":
            pipe.stage_synth(
                SyntheticOrgSpec(
                    n_teams=args.teams,
                    devs_per_team=args.devs,
                    days=args.days,
                    seed=cfg.seed,
                )
            )
        elif args.command == "run":
            for stage in STAGE_ORDER:
                try:
                    pipe.run_stage(stage)
                except CrewlensError as exc:
                    print(f"stage {stage} failed: {exc}", file=sys.stderr)
                    return 1
                print(f"stage {stage}: ok")
        else:
            try:
                pipe.run_stage(args.command)
            except CrewlensError as exc:
                print(f"stage {args.command} failed: {exc}", file=sys.stderr)
                return 1
    except CrewlensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
