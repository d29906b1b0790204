# tests/test_validator.py

from pathlib import Path

import pytest
import yaml

from processing.validator import validate_config

ROOT = Path(__file__).resolve().parent.parent
EXAMPLE = ROOT / "config" / "psp.example.yaml"


def write_config(tmp_path: Path, **overrides) -> Path:
    raw = {
        "corpus": [str(ROOT / "data" / "corpus" / "excavator_eu.jsonl")],
        "keyword_db": str(ROOT / "data" / "keywords" / "seed_keywords.tsv"),
        "query": {"application_terms": ["excavator"], "region": "EU"},
    }
    raw.update(overrides)
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(raw), encoding="utf-8")
    return path


def test_shipped_configs_are_valid():
    assert validate_config(EXAMPLE) == []
    assert validate_config(ROOT / "config" / "ecm_reprogramming.yaml") == []


def test_minimal_config_is_valid(tmp_path):
    assert validate_config(write_config(tmp_path)) == []


def test_reversed_window(tmp_path):
    query = {
        "application_terms": ["excavator"],
        "window": {"start": "2022-06-01T00:00:00Z", "end": "2022-01-01T00:00:00Z"},
    }
    diagnostics = validate_config(write_config(tmp_path, query=query))

    assert len(diagnostics) == 1
    assert diagnostics[0].location == "query.window"


def test_every_violation_is_reported(tmp_path):
    path = write_config(
        tmp_path,
        keyword_db=str(tmp_path / "missing.tsv"),
        sai={"weights": {"w_views": 0.9, "w_interactions": 0.4, "w_popularity": 0.2}},
    )

    diagnostics = validate_config(path)

    assert sorted(d.location for d in diagnostics) == ["keyword_db", "sai.weights"]
    assert "file not found" in str(diagnostics[0]) + str(diagnostics[1])


def test_unknown_section_and_live_source(tmp_path):
    path = write_config(tmp_path, metrics={"rate": 1}, live_source={"name": "nope"})

    locations = {d.location for d in validate_config(path)}

    assert locations == {"metrics", "live_source.name"}


def test_broken_yaml_is_one_diagnostic(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("query: [unclosed\n", encoding="utf-8")

    diagnostics = validate_config(path)

    assert len(diagnostics) == 1
    assert diagnostics[0].location == "<file>"


def test_unreadable_config_raises(tmp_path):
    with pytest.raises(OSError):
        validate_config(tmp_path / "absent.yaml")


def test_unknown_impact_rating(tmp_path):
    path = write_config(tmp_path, tuning={"impacts": {"dpf_tampering": "catastrophic"}})

    diagnostics = validate_config(path)

    assert [d.location for d in diagnostics] == ["tuning.impacts.dpf_tampering"]
