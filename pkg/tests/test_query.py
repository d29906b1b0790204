# tests/test_query.py

import random
from datetime import datetime, timedelta, timezone

import pytest

from domain.schemas import PostQuery, SocialPost, TimeWindow
from ingestion.corpus import PostCollection
from ingestion.query import query_posts
from simulator.corpus_generator import DEFAULT_TAGS, CorpusSimulator


def _post(post_id, text, created_at="2022-05-01T00:00:00Z", region=None):
    return SocialPost(id=post_id, created_at=created_at, text=text, region=region)


def test_empty_collection():
    query = PostQuery(application_terms=["excavator"], attack_keywords=["dpfdelete"])
    assert query_posts(PostCollection.of([]), query) == []


def test_application_and_keyword_required():
    posts = PostCollection.of([
        _post("1", "excavator #dpfdelete done"),
        _post("2", "tractor #dpfdelete done"),
        _post("3", "excavator for sale"),
        _post("4", "Excavator got the #DPFdelete treatment"),
        _post("5", "excavator #egrdelete"),
    ])
    query = PostQuery(application_terms=["Excavator"], attack_keywords=["#dpfdelete"])

    matches = query_posts(posts, query)

    assert [m.post.id for m in matches] == ["1", "4"]
    assert all(m.matched_keywords == ("dpfdelete",) for m in matches)


def test_window_from_2021():
    posts = PostCollection.of([
        _post("old", "excavator #dpfdelete", created_at="2019-06-01T00:00:00Z"),
        _post("new", "excavator #dpfdelete", created_at="2022-06-01T00:00:00Z"),
    ])
    window = TimeWindow(start=datetime(2021, 1, 1, tzinfo=timezone.utc))
    query = PostQuery(application_terms=["excavator"], attack_keywords=["dpfdelete"], window=window)

    assert [m.post.id for m in query_posts(posts, query)] == ["new"]


def test_region_filter_keeps_posts_without_region():
    posts = PostCollection.of([
        _post("eu", "excavator #dpfdelete", region="EU"),
        _post("us", "excavator #dpfdelete", region="US"),
        _post("unknown", "excavator #dpfdelete"),
    ])
    query = PostQuery(application_terms=["excavator"], attack_keywords=["dpfdelete"], region="EU")

    assert sorted(m.post.id for m in query_posts(posts, query)) == ["eu", "unknown"]


def test_keyword_as_plain_word_matches():
    posts = PostCollection.of([_post("1", "did a chiptuning on the excavator")])
    query = PostQuery(application_terms=["excavator"], attack_keywords=["chiptuning", "egroff"])

    assert query_posts(posts, query)[0].matched_keywords == ("chiptuning",)


# ---------- Generated corpora ----------

EPOCH = datetime(2019, 1, 1, tzinfo=timezone.utc)


def _nested_windows(rng: random.Random) -> tuple[TimeWindow, TimeWindow]:
    """Outer window (either bound may be open) and a window inside it."""
    p0, p1, p2, p3 = (EPOCH + timedelta(days=d) for d in sorted(rng.sample(range(1460), 4)))
    outer = TimeWindow(
        start=p0 if rng.random() < 0.7 else None,
        end=p3 if rng.random() < 0.7 else None,
    )
    return outer, TimeWindow(start=p1, end=p2)


def _query(window=None, region=None) -> PostQuery:
    return PostQuery(
        application_terms=["excavator", "tractor"],
        attack_keywords=list(DEFAULT_TAGS[:4]),
        region=region,
        window=window,
    )


@pytest.mark.parametrize("seed", range(20))
def test_narrower_window_gives_a_subset(seed):
    rng = random.Random(seed)
    posts = CorpusSimulator(seed=seed).generate(rng.randint(0, 80))
    outer, inner = _nested_windows(rng)
    region = rng.choice(["EU", "US", None])

    wide = {m.post.id: m for m in query_posts(posts, _query(outer, region))}
    narrow = query_posts(posts, _query(inner, region))

    assert {m.post.id for m in narrow} <= set(wide)
    assert all(wide[m.post.id] == m for m in narrow)


@pytest.mark.parametrize("seed", range(20))
def test_matches_are_an_ordered_sublist(seed):
    rng = random.Random(seed)
    posts = CorpusSimulator(seed=seed).generate(rng.randint(0, 80))
    outer, _ = _nested_windows(rng)
    position = {p.id: i for i, p in enumerate(posts)}

    for query in (_query(), _query(outer), _query(region="EU")):
        indices = [position[m.post.id] for m in query_posts(posts, query)]
        assert indices == sorted(set(indices))
