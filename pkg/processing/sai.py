# processing/sai.py
# Social Attraction Index: engagement-weighted ranking of threat scenarios.

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from domain.errors import SaiIntegrityError
from domain.schemas import AttackerClass, SocialPost
from feasibility.ratings import AttackVector
from ingestion.query import MatchedPost
from processing.keyword_db import AttackKeyword, KeywordDb

Granularity = Literal["scenario", "keyword"]


class SaiWeights(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    w_views: float = Field(default=0.4, ge=0)
    w_interactions: float = Field(default=0.4, ge=0)
    w_popularity: float = Field(default=0.2, ge=0)

    @model_validator(mode="after")
    def sums_to_one(self) -> "SaiWeights":
        total = self.w_views + self.w_interactions + self.w_popularity
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"SAI weights must sum to 1, got {total:g}")
        return self


class SaiEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    scenario: str
    keyword_tags: tuple[str, ...]
    raw_score: float = Field(..., ge=0)
    post_count: int = Field(..., ge=0)
    probability: float = Field(..., ge=0, le=1)
    attacker_class: AttackerClass
    dominant_vector: AttackVector


def score_post(post: SocialPost, w: SaiWeights) -> float:
    """Log-damped engagement: viral outliers must not swamp the index."""
    return (
        w.w_views * math.log1p(post.views)
        + w.w_interactions * math.log1p(post.interactions)
        + w.w_popularity * math.log1p(post.author_followers)
    )


@dataclass
class _Tally:
    scores: list[float] = field(default_factory=list)
    tags: set[str] = field(default_factory=set)
    classes: Counter = field(default_factory=Counter)
    vectors: Counter = field(default_factory=Counter)

    def add(self, score: float, keywords: list[AttackKeyword]) -> None:
        self.scores.append(score)
        for kw in keywords:
            self.tags.add(kw.tag)
            self.classes[kw.attacker_class] += 1
            self.vectors[kw.vector] += 1

    def attacker_class(self) -> AttackerClass:
        insider = self.classes[AttackerClass.INSIDER]
        outsider = self.classes[AttackerClass.OUTSIDER]
        return AttackerClass.INSIDER if insider >= outsider else AttackerClass.OUTSIDER

    def dominant_vector(self) -> AttackVector:
        # ties go to the less remote vector
        return min(AttackVector, key=lambda v: (-self.vectors[v], v.rank))


def _resolve(match: MatchedPost, db: KeywordDb) -> list[AttackKeyword]:
    keywords = []
    for tag in match.matched_keywords:
        keyword = db.get(tag)
        if keyword is None:
            raise SaiIntegrityError(tag)
        keywords.append(keyword)
    return keywords


def compute_sai(
    matches: list[MatchedPost],
    db: KeywordDb,
    w: SaiWeights = SaiWeights(),
    granularity: Granularity = "scenario",
) -> list[SaiEntry]:
    """
    Rank scenarios (or individual tags) by summed post scores.

    A post contributes its full score to every scenario it matched.
    Order: raw_score descending, then scenario label, then tags.
    """
    tallies: dict[tuple[str, str], _Tally] = {}

    for match in matches:
        keywords = _resolve(match, db)
        score = score_post(match.post, w)
        groups: dict[tuple[str, str], list[AttackKeyword]] = {}
        for kw in keywords:
            key = (kw.scenario, "") if granularity == "scenario" else (kw.scenario, kw.tag)
            groups.setdefault(key, []).append(kw)
        for key, group in groups.items():
            tallies.setdefault(key, _Tally()).add(score, group)

    if not tallies:
        return []

    # fsum is exactly rounded, so the result does not depend on post order
    raw = {key: math.fsum(t.scores) for key, t in tallies.items()}
    total = math.fsum(raw.values())
    count = len(tallies)

    entries = [
        SaiEntry(
            scenario=key[0],
            keyword_tags=tuple(sorted(t.tags)),
            raw_score=raw[key],
            post_count=len(t.scores),
            probability=raw[key] / total if total > 0 else 1.0 / count,
            attacker_class=t.attacker_class(),
            dominant_vector=t.dominant_vector(),
        )
        for key, t in tallies.items()
    ]
    entries.sort(key=lambda e: (-e.raw_score, e.scenario, e.keyword_tags))
    return entries


def split_insider_outsider(sai: list[SaiEntry]) -> tuple[list[SaiEntry], list[SaiEntry]]:
    insider = [e for e in sai if e.attacker_class == AttackerClass.INSIDER]
    outsider = [e for e in sai if e.attacker_class == AttackerClass.OUTSIDER]
    return insider, outsider
