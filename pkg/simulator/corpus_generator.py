# simulator/corpus_generator.py

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone
from typing import Optional, Sequence

from domain.schemas import SocialPost
from ingestion.corpus import PostCollection

DEFAULT_TERMS = ("excavator", "truck", "tractor")
DEFAULT_TAGS = ("dpfdelete", "egrdelete", "adbluedelete", "chiptuning", "obdflash", "relayattack")
FILLER_TAGS = ("heavyequipment", "construction", "diesel", "fleet")
REGIONS = ("EU", "US", None)

PHRASES = (
    "done on the {term} today",
    "{term} runs better than ever",
    "anyone tried this on a {term}?",
    "kit for the {term} arrived",
    "{term} owners, thoughts?",
)


class CorpusSimulator:
    """
    Seeded synthetic social-media corpus.

    Usage:
        sim = CorpusSimulator(seed=7)
        posts = sim.generate(200)
    """

    def __init__(
        self,
        terms: Sequence[str] = DEFAULT_TERMS,
        tags: Sequence[str] = DEFAULT_TAGS,
        start: datetime = datetime(2019, 1, 1, tzinfo=timezone.utc),
        end: datetime = datetime(2023, 1, 1, tzinfo=timezone.utc),
        seed: Optional[int] = 42,
    ):
        self.terms = tuple(terms)
        self.tags = tuple(tags)
        self.start = start
        self.span_s = int((end - start).total_seconds())
        self.seq = 0
        self._rng = random.Random(seed)

    # ---------- Engagement ----------

    def _views(self) -> int:
        return int(self._rng.lognormvariate(mu=7.5, sigma=1.5))

    def _interactions(self, views: int) -> int:
        return int(views * self._rng.uniform(0.0, 0.08))

    def _followers(self) -> int:
        return int(self._rng.lognormvariate(mu=6.0, sigma=1.8))

    # ---------- Posts ----------

    def _text(self) -> str:
        term = self._rng.choice(self.terms)
        phrase = self._rng.choice(PHRASES).format(term=term)
        picked = self._rng.sample(self.tags, k=self._rng.randint(0, 2))
        if self._rng.random() < 0.3:
            picked.append(self._rng.choice(FILLER_TAGS))
        return " ".join([phrase] + [f"#{t}" for t in picked])

    def generate_post(self) -> SocialPost:
        self.seq += 1
        views = self._views()
        return SocialPost(
            id=f"sim-{self.seq:06d}",
            created_at=self.start + timedelta(seconds=self._rng.randrange(self.span_s)),
            text=self._text(),
            views=views,
            interactions=self._interactions(views),
            author_followers=self._followers(),
            region=self._rng.choice(REGIONS),
        )

    def generate(self, count: int) -> PostCollection:
        return PostCollection.of(self.generate_post() for _ in range(count))
