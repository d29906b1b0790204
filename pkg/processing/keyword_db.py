# processing/keyword_db.py

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable, Iterator, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from domain.errors import DuplicateKeywordError, InvalidKeywordError
from domain.schemas import AttackerClass, to_utc
from feasibility.ratings import AttackVector
from ingestion.hashtags import is_valid_tag
from ingestion.query import MatchedPost

logger = logging.getLogger(__name__)

DB_FORMAT_VERSION = 1

Origin = Literal["seed", "auto_learned"]


class AttackKeyword(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    tag: str = Field(..., min_length=1)
    scenario: str = Field(..., min_length=1)
    attacker_class: AttackerClass
    vector: AttackVector
    origin: Origin = "seed"
    source_run: Optional[str] = None
    parent_tag: Optional[str] = None
    added_at: datetime

    @field_validator("added_at")
    @classmethod
    def utc(cls, value: datetime) -> datetime:
        return to_utc(value)

    @model_validator(mode="after")
    def provenance(self) -> "AttackKeyword":
        if self.origin == "auto_learned" and not (self.source_run and self.parent_tag):
            raise ValueError("auto-learned keywords need source_run and parent_tag")
        if self.origin == "seed" and (self.source_run or self.parent_tag):
            raise ValueError("seed keywords carry no learning provenance")
        return self


@dataclass(frozen=True)
class KeywordDb:
    """Immutable keyword set, kept sorted by tag."""
    keywords: tuple[AttackKeyword, ...] = ()
    version: int = DB_FORMAT_VERSION
    _by_tag: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_tag", {k.tag: k for k in self.keywords})

    def __len__(self) -> int:
        return len(self.keywords)

    def __iter__(self) -> Iterator[AttackKeyword]:
        return iter(self.keywords)

    def __contains__(self, tag: object) -> bool:
        return tag in self._by_tag

    def get(self, tag: str) -> Optional[AttackKeyword]:
        return self._by_tag.get(tag)

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(k.tag for k in self.keywords)

    def scenarios(self) -> list[str]:
        return sorted({k.scenario for k in self.keywords})


def seed_db(entries: Iterable[AttackKeyword]) -> KeywordDb:
    entries = list(entries)
    for entry in entries:
        if not is_valid_tag(entry.tag):
            raise InvalidKeywordError(entry.tag)
    counts = Counter(e.tag for e in entries)
    collisions = [tag for tag, n in counts.items() if n > 1]
    if collisions:
        raise DuplicateKeywordError(collisions)
    return KeywordDb(keywords=tuple(sorted(entries, key=lambda k: k.tag)))


# ---------- Auto-learning ----------

@dataclass(frozen=True)
class ExpansionParams:
    min_cooccurrence: int = 3
    min_support_fraction: float = 0.05

    def __post_init__(self):
        if self.min_cooccurrence < 1:
            raise ValueError("min_cooccurrence must be a positive integer")
        if not 0.0 <= self.min_support_fraction <= 1.0:
            raise ValueError("min_support_fraction must be within [0, 1]")


def expand_keywords(
    db: KeywordDb,
    matches: list[MatchedPost],
    params: ExpansionParams = ExpansionParams(),
    run_id: str = "manual",
    learned_at: Optional[datetime] = None,
    ignore: Iterable[str] = (),
) -> tuple[KeywordDb, list[AttackKeyword]]:
    """
    Learn new tags from hashtags co-occurring with known keywords.

    A candidate is accepted when it shares a post with at least one known
    keyword in >= min_cooccurrence posts and in >= min_support_fraction of
    all matched posts. It inherits scenario, class and vector from the known
    keyword it co-occurs with most (ties: smallest tag).
    Tags in `ignore` (the application terms) are never learned.
    """
    if not matches:
        return db, []

    ignored = {t.lower() for t in ignore}
    support: Counter[str] = Counter()
    pairs: dict[str, Counter[str]] = defaultdict(Counter)
    newest: dict[str, datetime] = {}

    for match in matches:
        hashtags = set(match.post.hashtags)
        known = {t for t in match.matched_keywords if t in db} | {t for t in hashtags if t in db}
        if not known:
            continue
        for candidate in hashtags - known:
            if candidate in db or candidate in ignored or not is_valid_tag(candidate):
                continue
            support[candidate] += 1
            for parent in known:
                pairs[candidate][parent] += 1
            seen = newest.get(candidate)
            if seen is None or match.post.created_at > seen:
                newest[candidate] = match.post.created_at

    total = len(matches)
    added: list[AttackKeyword] = []
    for candidate in sorted(support):
        count = support[candidate]
        if count < params.min_cooccurrence or count / total < params.min_support_fraction:
            continue
        parent_tag = min(pairs[candidate], key=lambda t: (-pairs[candidate][t], t))
        parent = db.get(parent_tag)
        added.append(
            AttackKeyword(
                tag=candidate,
                scenario=parent.scenario,
                attacker_class=parent.attacker_class,
                vector=parent.vector,
                origin="auto_learned",
                source_run=run_id,
                parent_tag=parent_tag,
                added_at=learned_at or newest[candidate],
            )
        )

    for keyword in added:
        logger.info(
            f"Learned keyword #{keyword.tag} -> {keyword.scenario} "
            f"(parent #{keyword.parent_tag}, {support[keyword.tag]}/{total} posts)"
        )

    if not added:
        return db, []
    return seed_db(list(db.keywords) + added), added
