# storage/parquet_store.py

from __future__ import annotations

from pathlib import Path
from typing import Optional

import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

from domain.schemas import SocialPost
from ingestion.query import MatchedPost

COLUMNS = [
    "id",
    "created_at",
    "text",
    "views",
    "interactions",
    "author_followers",
    "region",
    "matched_keywords",
]

INPUTS_KEY = b"psp.inputs"


class ParquetMatchStore:
    """
    Parquet storage for the matched posts of a run, read back by the
    stage commands (keyword expansion, price mining). The fingerprint of
    the producing inputs travels in the schema metadata.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)

    @staticmethod
    def _flatten(match: MatchedPost) -> dict:
        """
        Flatten a matched post into a single row.
        """
        post = match.post
        return {
            "id": post.id,
            "created_at": post.created_at,
            "text": post.text,
            "views": post.views,
            "interactions": post.interactions,
            "author_followers": post.author_followers,
            "region": post.region,
            "matched_keywords": " ".join(match.matched_keywords),
        }

    def write(self, matches: list[MatchedPost], inputs: Optional[str] = None) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        df = pd.DataFrame([self._flatten(m) for m in matches], columns=COLUMNS)
        df["created_at"] = pd.to_datetime(df["created_at"], utc=True)
        df = df.astype({"views": "int64", "interactions": "int64", "author_followers": "int64"})

        table = pa.Table.from_pandas(df, preserve_index=False)
        if inputs is not None:
            metadata = dict(table.schema.metadata or {})
            metadata[INPUTS_KEY] = inputs.encode("utf-8")
            table = table.replace_schema_metadata(metadata)
        pq.write_table(table, self.path)

    def exists(self) -> bool:
        return self.path.exists()

    def inputs(self) -> Optional[str]:
        """Fingerprint recorded by `write`, or None."""
        metadata = pq.read_schema(self.path).metadata or {}
        value = metadata.get(INPUTS_KEY)
        return value.decode("utf-8") if value is not None else None

    def load(self) -> list[MatchedPost]:
        if not self.path.exists():
            raise FileNotFoundError(f"No matched-post parquet file at {self.path}")
        df = pd.read_parquet(self.path)

        matches: list[MatchedPost] = []
        for row in df.to_dict(orient="records"):
            post = SocialPost(
                id=row["id"],
                created_at=row["created_at"].to_pydatetime(),
                text=row["text"],
                views=int(row["views"]),
                interactions=int(row["interactions"]),
                author_followers=int(row["author_followers"]),
                region=row["region"] if isinstance(row["region"], str) else None,
            )
            matches.append(
                MatchedPost(post=post, matched_keywords=tuple(row["matched_keywords"].split()))
            )
        return matches
