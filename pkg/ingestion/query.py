# ingestion/query.py

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from domain.schemas import PostQuery, SocialPost
from ingestion.hashtags import contains_word


@dataclass(frozen=True)
class MatchedPost:
    post: SocialPost
    matched_keywords: tuple[str, ...]

    def __post_init__(self):
        if not self.matched_keywords:
            raise ValueError(f"post {self.post.id} matched no attack keyword")


def _mentions_application(post: SocialPost, terms: tuple[str, ...]) -> bool:
    # substring: model names are often glued to other words ("cat320excavator")
    text = post.text.lower()
    return any(term in text or term in post.hashtags for term in terms)


def _matched_keywords(post: SocialPost, keywords: tuple[str, ...]) -> tuple[str, ...]:
    # whole word or hashtag only
    return tuple(
        kw for kw in keywords
        if kw in post.hashtags or contains_word(post.text, kw)
    )


def query_posts(collection: Iterable[SocialPost], query: PostQuery) -> list[MatchedPost]:
    """
    Posts mentioning an application term and at least one attack keyword,
    restricted to region and window when given. Keeps collection order.
    """
    matches: list[MatchedPost] = []
    for post in collection:
        if query.window is not None and not query.window.contains(post.created_at):
            continue
        if query.region is not None and post.region is not None and post.region != query.region:
            continue
        if not _mentions_application(post, query.application_terms):
            continue
        hits = _matched_keywords(post, query.attack_keywords)
        if hits:
            matches.append(MatchedPost(post=post, matched_keywords=hits))
    return matches
