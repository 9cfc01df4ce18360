import yaml

import pytest

from crewlens.facts import load_commit_facts
from crewlens.identity import merge_identities, signatures_from_records
from crewlens.langconfig import LanguageConfig
from crewlens.synth import SyntheticOrgSpec, generate_synthetic_org


def generate(tmp_path, **kw):
    spec = SyntheticOrgSpec(**kw)
    facts = tmp_path / "facts.jsonl"
    teams = tmp_path / "teams.yml"
    generate_synthetic_org(spec, facts, teams)
    return facts, teams


def test_shape_matches_spec(tmp_path):
    facts_path, teams_path = generate(tmp_path, n_teams=3, devs_per_team=5, seed=0)
    facts = load_commit_facts(facts_path)
    identities, _ = merge_identities(
        signatures_from_records(facts.records), LanguageConfig()
    )
    assert len(identities) == 15
    sidecar = yaml.safe_load(teams_path.read_text())
    assert len(sidecar) == 15
    assert len({e["team"] for e in sidecar}) == 3
    assert all(set(e) == {"key", "team"} for e in sidecar)


def test_records_sorted_and_valid(tmp_path):
    facts_path, _ = generate(tmp_path, seed=1)
    facts = load_commit_facts(facts_path)
    times = [r.authored_at for r in facts.records]
    assert times == sorted(times)
    assert facts.ownership  # snapshot present
    assert facts.identifiers


def test_byte_identical_across_runs(tmp_path):
    a_facts, a_teams = generate(tmp_path / "a", seed=7)
    b_facts, b_teams = generate(tmp_path / "b", seed=7)
    assert a_facts.read_bytes() == b_facts.read_bytes()
    assert a_teams.read_bytes() == b_teams.read_bytes()


def test_different_seeds_differ(tmp_path):
    a_facts, _ = generate(tmp_path / "a", seed=1)
    b_facts, _ = generate(tmp_path / "b", seed=2)
    assert a_facts.read_bytes() != b_facts.read_bytes()


def test_degenerate_single_dev_accepted_downstream(tmp_path):
    from crewlens.features import build_daily_series, build_language_matrix

    facts_path, _ = generate(tmp_path, n_teams=1, devs_per_team=1, days=30, seed=3)
    facts = load_commit_facts(facts_path)
    config = LanguageConfig()
    identities, key_map = merge_identities(
        signatures_from_records(facts.records), config
    )
    assert len(identities) == 1
    series = build_daily_series(facts.records, key_map)
    assert len(series) == 1
    matrix = build_language_matrix(facts.records, key_map, config)
    assert matrix.ids == (0,)


def test_invalid_spec_rejected():
    with pytest.raises(ValueError):
        SyntheticOrgSpec(n_teams=0)
