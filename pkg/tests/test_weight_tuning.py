# tests/test_weight_tuning.py

import random
from pathlib import Path

import pytest
from pydantic import ValidationError

from domain.schemas import AttackerClass, PostQuery, TimeWindow
from feasibility.config import load_feasibility_config
from feasibility.ratings import AttackVector, FeasibilityRating
from ingestion.corpus import load_corpus
from ingestion.query import query_posts
from processing.sai import SaiEntry, compute_sai, split_insider_outsider
from processing.weight_tuning import (
    CorrectiveFactors,
    TuningThresholds,
    corrective_factors,
    tune_for_scenario,
    tune_table,
)
from storage.keyword_store import load_db

DATA = Path(__file__).resolve().parent.parent / "data"
BASE = load_feasibility_config().vector_table


def _entry(scenario, vector, score, cls=AttackerClass.INSIDER):
    return SaiEntry(
        scenario=scenario, keyword_tags=("x",), raw_score=score, post_count=1,
        probability=0.5, attacker_class=cls, dominant_vector=vector,
    )


def _factors(**shares):
    return CorrectiveFactors(shares={v: shares.get(v.value, 0.0) for v in AttackVector})


# ---------- Corrective factors ----------

def test_no_entries_gives_zero_factors():
    f = corrective_factors([], "ecm_reprogramming")
    assert f.is_empty()
    assert f.top_vector() is None


def test_single_entry_takes_whole_share():
    f = corrective_factors([_entry("ecm", AttackVector.PHYSICAL, 4.2)], "ecm")
    assert f[AttackVector.PHYSICAL] == 1.0
    assert f[AttackVector.LOCAL] == 0.0


def test_shares_follow_scores():
    entries = [
        _entry("ecm", AttackVector.PHYSICAL, 6.0),
        _entry("ecm", AttackVector.LOCAL, 2.0),
        _entry("other", AttackVector.NETWORK, 100.0),
    ]
    f = corrective_factors(entries, "ecm")
    assert f[AttackVector.PHYSICAL] == pytest.approx(0.75)
    assert f[AttackVector.LOCAL] == pytest.approx(0.25)
    assert f[AttackVector.NETWORK] == 0.0
    assert f.top_vector() == AttackVector.PHYSICAL


def test_factors_must_be_normalized():
    with pytest.raises(ValidationError):
        _factors(physical=0.5, local=0.2)


def test_top_vector_tie_goes_to_less_remote():
    assert _factors(local=0.5, network=0.5).top_vector() == AttackVector.LOCAL


# ---------- Table tuning ----------

def test_zero_factors_keep_base():
    assert tune_table(BASE, CorrectiveFactors.zero()) == BASE


def test_major_share_raises_two_steps():
    tuned = tune_table(BASE, _factors(physical=0.75, local=0.25))
    assert tuned[AttackVector.PHYSICAL] == FeasibilityRating.MEDIUM
    assert tuned[AttackVector.LOCAL] == FeasibilityRating.MEDIUM
    assert tuned[AttackVector.ADJACENT] == BASE[AttackVector.ADJACENT]


def test_high_is_clamped():
    tuned = tune_table(BASE, _factors(network=0.6, adjacent=0.4))
    assert tuned[AttackVector.NETWORK] == FeasibilityRating.HIGH


def test_tuning_never_lowers_a_rating():
    rng = random.Random(3)
    for _ in range(200):
        weights = [rng.random() for _ in AttackVector]
        total = sum(weights)
        f = CorrectiveFactors(shares={v: w / total for v, w in zip(AttackVector, weights)})
        tuned = tune_table(BASE, f)
        assert all(tuned[v] >= BASE[v] for v in AttackVector)


def test_thresholds_ordered():
    with pytest.raises(ValidationError):
        TuningThresholds(major_share=0.2, minor_share=0.5)
    assert TuningThresholds().steps(0.5) == 2
    assert TuningThresholds().steps(0.2) == 1
    assert TuningThresholds().steps(0.19) == 0


# ---------- Per scenario ----------

def test_outsider_only_scenario_passes_through():
    outsider = [_entry("vehicle_theft", AttackVector.ADJACENT, 9.0, AttackerClass.OUTSIDER)]
    table = tune_for_scenario(BASE, [], outsider, "vehicle_theft")
    assert table.tuned == table.base == BASE
    assert table.factors.is_empty()
    assert table.mode == "outsider_passthrough"


def test_insider_scenario_without_data_keeps_base():
    table = tune_for_scenario(BASE, [], [], "ecm_reprogramming")
    assert table.tuned == BASE
    assert table.mode == "no_data"


def test_outsider_neutrality_randomized():
    rng = random.Random(11)
    scenarios = [f"s{i}" for i in range(6)]
    for _ in range(300):
        sai = [
            _entry(
                rng.choice(scenarios),
                rng.choice(list(AttackVector)),
                rng.uniform(0.0, 20.0),
                rng.choice(list(AttackerClass)),
            )
            for _ in range(rng.randint(0, 12))
        ]
        insider, outsider = split_insider_outsider(sai)
        insider_scenarios = {e.scenario for e in insider}
        for scenario in {e.scenario for e in outsider} - insider_scenarios:
            table = tune_for_scenario(BASE, insider, outsider, scenario)
            assert table.tuned == BASE
            assert table.factors == CorrectiveFactors.zero()


# ---------- Two-epoch ECM fixture ----------

def _ecm_table(window=None, granularity="scenario"):
    db = load_db(DATA / "keywords" / "seed_keywords.tsv")
    corpus = load_corpus(DATA / "corpus" / "ecm_two_epoch.jsonl")
    query = PostQuery(application_terms=["truck"], attack_keywords=db.tags, region="EU", window=window)
    sai = compute_sai(query_posts(corpus, query), db, granularity=granularity)
    insider, outsider = split_insider_outsider(sai)
    return tune_for_scenario(BASE, insider, outsider, "ecm_reprogramming", window=window)


@pytest.mark.parametrize("granularity", ["scenario", "keyword"])
def test_full_history_puts_physical_on_top(granularity):
    table = _ecm_table(granularity=granularity)
    assert table.factors.top_vector() == AttackVector.PHYSICAL
    assert table.tuned[AttackVector.PHYSICAL] > BASE[AttackVector.PHYSICAL]


@pytest.mark.parametrize("granularity", ["scenario", "keyword"])
def test_recent_window_puts_local_on_top(granularity):
    window = TimeWindow.parse("2021-01-01..")
    table = _ecm_table(window=window, granularity=granularity)
    assert table.factors.top_vector() == AttackVector.LOCAL
    assert table.tuned[AttackVector.LOCAL] > BASE[AttackVector.LOCAL]
    assert table.window == window
