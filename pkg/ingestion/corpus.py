# ingestion/corpus.py
# Offline corpus: one JSON record per line with fields
# id, created_at (ISO-8601 UTC), text, views, interactions, author_followers, region.

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from pydantic import ValidationError

from domain.errors import CorpusFormatError, DuplicatePostError
from domain.schemas import SocialPost
from storage.atomic import atomic_write_text

logger = logging.getLogger(__name__)


def _order_key(post: SocialPost):
    return (post.created_at, post.id)


@dataclass(frozen=True)
class PostCollection:
    """
    Immutable post collection, iterated in ascending (created_at, id) order.
    `skipped` counts records dropped in lenient mode or by a live source.
    """
    posts: tuple[SocialPost, ...] = ()
    skipped: int = 0
    _ids: frozenset = field(default=frozenset(), repr=False, compare=False)

    @classmethod
    def of(cls, posts: Iterable[SocialPost], skipped: int = 0) -> "PostCollection":
        ordered = tuple(sorted(posts, key=_order_key))
        ids = Counter(p.id for p in ordered)
        dups = sorted(i for i, count in ids.items() if count > 1)
        if dups:
            raise DuplicatePostError(dups[0])
        return cls(posts=ordered, skipped=skipped, _ids=frozenset(ids))

    def __iter__(self) -> Iterator[SocialPost]:
        return iter(self.posts)

    def __len__(self) -> int:
        return len(self.posts)

    def __contains__(self, post_id: object) -> bool:
        return post_id in self._ids

    def merge(self, other: "PostCollection") -> "PostCollection":
        clash = sorted(self._ids & other._ids)
        if clash:
            raise DuplicatePostError(clash[0])
        return PostCollection.of(
            list(self.posts) + list(other.posts), skipped=self.skipped + other.skipped
        )


def parse_record(line: str) -> SocialPost:
    record = json.loads(line)
    if not isinstance(record, dict):
        raise ValueError("record is not a JSON object")
    return SocialPost.model_validate(record)


def load_corpus(path: str | Path, strict: bool = True) -> PostCollection:
    """
    Load a line-delimited corpus.

    - strict (default): the first malformed line raises CorpusFormatError
    - lenient: malformed lines are skipped and counted
    Duplicate ids always raise, citing both line numbers.
    """
    path = Path(path)
    posts: list[SocialPost] = []
    first_seen: dict[str, int] = {}
    skipped = 0

    # invalid UTF-8 counts as a malformed line
    with path.open("rb") as fh:
        for line_no, raw in enumerate(fh, start=1):
            try:
                line = raw.decode("utf-8")
                if not line.strip():
                    continue
                post = parse_record(line)
            except (ValueError, ValidationError) as exc:
                if strict:
                    raise CorpusFormatError(line_no, str(exc).splitlines()[0]) from exc
                skipped += 1
                logger.warning(f"{path.name}:{line_no} skipped ({str(exc).splitlines()[0]})")
                continue

            if post.id in first_seen:
                raise DuplicatePostError(post.id, first_seen[post.id], line_no)
            first_seen[post.id] = line_no
            posts.append(post)

    logger.info(f"Loaded {len(posts)} posts from {path} ({skipped} skipped)")
    return PostCollection.of(posts, skipped=skipped)


def dump_corpus(collection: Iterable[SocialPost]) -> str:
    lines = [
        json.dumps(post.to_record(), ensure_ascii=False, separators=(", ", ": "))
        for post in collection
    ]
    return "".join(line + "\n" for line in lines)


def save_corpus(collection: Iterable[SocialPost], path: str | Path) -> None:
    atomic_write_text(path, dump_corpus(collection))
