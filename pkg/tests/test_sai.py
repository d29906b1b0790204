# tests/test_sai.py

import math
import random
from pathlib import Path

import pytest

from domain.errors import SaiIntegrityError
from domain.schemas import AttackerClass, PostQuery, SocialPost
from feasibility.ratings import AttackVector
from ingestion.corpus import load_corpus
from ingestion.query import MatchedPost, query_posts
from processing.sai import SaiEntry, SaiWeights, compute_sai, score_post, split_insider_outsider
from simulator.corpus_generator import CorpusSimulator
from storage.keyword_store import load_db

DATA = Path(__file__).resolve().parent.parent / "data"
DB = load_db(DATA / "keywords" / "seed_keywords.tsv")
QUERY = PostQuery(application_terms=["excavator", "truck", "tractor"], attack_keywords=DB.tags)


def _post(post_id, views=0, interactions=0, followers=0, text="excavator"):
    return SocialPost(
        id=post_id, created_at="2022-01-01T00:00:00Z", text=text,
        views=views, interactions=interactions, author_followers=followers,
    )


def _random_matches(seed: int) -> list[MatchedPost]:
    sim = CorpusSimulator(seed=seed)
    return query_posts(sim.generate(random.Random(seed).randint(0, 40)), QUERY)


# ---------- Post score ----------

def test_zero_engagement_scores_zero():
    assert score_post(_post("p"), SaiWeights()) == 0.0


def test_unit_log():
    w = SaiWeights(w_views=1.0, w_interactions=0.0, w_popularity=0.0)
    assert score_post(_post("p", views=1), w) == pytest.approx(math.log(2), abs=1e-12)
    assert score_post(_post("q", views=1, interactions=50, followers=50), w) == score_post(_post("p", views=1), w)


def test_default_weights_hand_value():
    post = _post("p", views=100, interactions=10, followers=1000)
    assert score_post(post, SaiWeights()) == pytest.approx(4.1869572717, abs=1e-9)


def test_weights_must_sum_to_one():
    with pytest.raises(ValueError):
        SaiWeights(w_views=0.5, w_interactions=0.5, w_popularity=0.5)


# ---------- Ranking ----------

def test_empty_matches():
    assert compute_sai([], DB) == []


def test_single_scenario_probability_one():
    matches = [MatchedPost(_post(str(i), views=10 * i), ("dpfdelete",)) for i in range(1, 4)]
    sai = compute_sai(matches, DB)
    assert len(sai) == 1
    assert sai[0].probability == 1.0
    assert sai[0].post_count == 3


def test_three_to_one_split():
    matches = [MatchedPost(_post(f"d{i}", views=500), ("dpfdelete",)) for i in range(3)]
    matches.append(MatchedPost(_post("e", views=500), ("egrdelete",)))

    sai = compute_sai(matches, DB)

    assert [e.scenario for e in sai] == ["dpf_tampering", "egr_tampering"]
    assert sai[0].probability == pytest.approx(0.75, abs=1e-12)
    assert sai[1].probability == pytest.approx(0.25, abs=1e-12)


def test_zero_scores_share_uniformly():
    matches = [
        MatchedPost(_post("a"), ("dpfdelete",)),
        MatchedPost(_post("b"), ("relayattack",)),
    ]
    sai = compute_sai(matches, DB)
    assert [e.probability for e in sai] == [0.5, 0.5]
    assert [e.scenario for e in sai] == ["dpf_tampering", "vehicle_theft"]


def test_post_counts_toward_every_matched_scenario():
    matches = [MatchedPost(_post("a", views=99), ("dpfdelete", "egrdelete"))]
    sai = compute_sai(matches, DB)
    assert {e.scenario for e in sai} == {"dpf_tampering", "egr_tampering"}
    assert sai[0].raw_score == sai[1].raw_score


def test_class_and_vector_majority():
    matches = [
        MatchedPost(_post("a", views=10), ("benchflash",)),
        MatchedPost(_post("b", views=10), ("obdflash",)),
        MatchedPost(_post("c", views=10), ("obdflash",)),
    ]
    entry = compute_sai(matches, DB)[0]
    assert entry.attacker_class == AttackerClass.INSIDER
    assert entry.dominant_vector == AttackVector.LOCAL
    assert entry.keyword_tags == ("benchflash", "obdflash")


def test_vector_tie_goes_to_less_remote():
    matches = [
        MatchedPost(_post("a", views=10), ("benchflash",)),
        MatchedPost(_post("b", views=10), ("obdflash",)),
    ]
    assert compute_sai(matches, DB)[0].dominant_vector == AttackVector.PHYSICAL


def test_keyword_granularity():
    matches = [
        MatchedPost(_post("a", views=1000), ("benchflash",)),
        MatchedPost(_post("b", views=10), ("obdflash",)),
    ]
    sai = compute_sai(matches, DB, granularity="keyword")
    assert [(e.scenario, e.keyword_tags, e.dominant_vector) for e in sai] == [
        ("ecm_reprogramming", ("benchflash",), AttackVector.PHYSICAL),
        ("ecm_reprogramming", ("obdflash",), AttackVector.LOCAL),
    ]


def test_unknown_keyword_is_integrity_error():
    with pytest.raises(SaiIntegrityError):
        compute_sai([MatchedPost(_post("a"), ("notatag",))], DB)


def test_excavator_fixture_ranks_dpf_first():
    corpus = load_corpus(DATA / "corpus" / "excavator_eu.jsonl")
    query = PostQuery(application_terms=["excavator"], attack_keywords=DB.tags, region="EU")

    sai = compute_sai(query_posts(corpus, query), DB)

    assert [e.scenario for e in sai] == [
        "dpf_tampering", "egr_tampering", "scr_tampering", "vehicle_theft",
    ]
    assert sai[0].raw_score == pytest.approx(30.278460763, abs=1e-6)


# ---------- Split ----------

def _entry(scenario, cls):
    return SaiEntry(
        scenario=scenario, keyword_tags=("x",), raw_score=1.0, post_count=1,
        probability=1 / 3, attacker_class=cls, dominant_vector=AttackVector.LOCAL,
    )


def test_split():
    assert split_insider_outsider([]) == ([], [])
    insiders = [_entry("a", AttackerClass.INSIDER)]
    assert split_insider_outsider(insiders) == (insiders, [])

    mixed = [
        _entry("a", AttackerClass.INSIDER),
        _entry("b", AttackerClass.OUTSIDER),
        _entry("c", AttackerClass.INSIDER),
    ]
    insider, outsider = split_insider_outsider(mixed)
    assert [e.scenario for e in insider] == ["a", "c"]
    assert [e.scenario for e in outsider] == ["b"]


# ---------- Properties over randomized corpora ----------

def test_randomized_invariants():
    for seed in range(500):
        matches = _random_matches(seed)
        sai = compute_sai(matches, DB)

        assert compute_sai(matches, DB) == sai

        shuffled = list(matches)
        random.Random(seed).shuffle(shuffled)
        assert compute_sai(shuffled, DB) == sai

        if sai:
            assert math.fsum(e.probability for e in sai) == pytest.approx(1.0, abs=1e-9)
            scores = [e.raw_score for e in sai]
            assert scores == sorted(scores, reverse=True)


def test_adding_a_post_never_lowers_a_score():
    for seed in range(500):
        matches = _random_matches(seed)
        if len(matches) < 2:
            continue
        before = {e.scenario: e.raw_score for e in compute_sai(matches[:-1], DB)}
        after = {e.scenario: e.raw_score for e in compute_sai(matches, DB)}
        for scenario, score in before.items():
            assert after[scenario] >= score


def test_adding_a_post_never_lowers_its_scenario_rank():
    for seed in range(300):
        rng = random.Random(seed)
        matches = _random_matches(seed)
        before = [e.scenario for e in compute_sai(matches, DB)]
        if not before:
            continue
        scenario = rng.choice(before)
        tag = rng.choice([k.tag for k in DB.keywords if k.scenario == scenario])
        extra = MatchedPost(
            post=_post(f"extra-{seed}", views=rng.randint(0, 10**6),
                       interactions=rng.randint(0, 10**4), text=f"excavator #{tag}"),
            matched_keywords=(tag,),
        )

        after = [e.scenario for e in compute_sai(matches + [extra], DB)]

        assert after.index(scenario) <= before.index(scenario)
