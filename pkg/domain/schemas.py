# domain/schemas.py
# Pydantic models shared by ingestion, keyword DB and SAI (Pydantic v2).

from __future__ import annotations

from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ingestion.hashtags import extract_hashtags


# ---------- Time helpers ----------

def to_utc(value: datetime) -> datetime:
    """
    Normalize to an aware UTC datetime with seconds precision.
    Naive datetimes are taken as UTC.
    """
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc).replace(microsecond=0)


def format_utc(value: datetime) -> str:
    return to_utc(value).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_utc(text: str) -> datetime:
    """Parse an ISO-8601 date or datetime ('Z' accepted) into UTC."""
    text = text.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    return to_utc(datetime.fromisoformat(text))


# ---------- Attacker profile ----------

class AttackerClass(str, Enum):
    INSIDER = "insider"
    OUTSIDER = "outsider"


# ---------- Posts ----------

class SocialPost(BaseModel):
    """
    One ingested social post.

    `hashtags` is always derived from `text`; any value supplied by the
    source is discarded.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    id: str = Field(..., min_length=1)
    created_at: datetime
    text: str
    hashtags: tuple[str, ...] = ()
    views: int = Field(default=0, ge=0)
    interactions: int = Field(default=0, ge=0)
    author_followers: int = Field(default=0, ge=0)
    region: Optional[str] = None

    @model_validator(mode="before")
    @classmethod
    def derive_hashtags(cls, data: Any) -> Any:
        if isinstance(data, dict) and "text" in data:
            data = dict(data)
            data["hashtags"] = tuple(extract_hashtags(str(data["text"])))
        return data

    @field_validator("created_at")
    @classmethod
    def utc_seconds(cls, value: datetime) -> datetime:
        return to_utc(value)

    def to_record(self) -> dict:
        """Corpus-format record (field order fixed, hashtags omitted)."""
        return {
            "id": self.id,
            "created_at": format_utc(self.created_at),
            "text": self.text,
            "views": self.views,
            "interactions": self.interactions,
            "author_followers": self.author_followers,
            "region": self.region,
        }


# ---------- Query ----------

class TimeWindow(BaseModel):
    """[start, end) interval; a missing bound is unbounded."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    start: Optional[datetime] = None
    end: Optional[datetime] = None

    @field_validator("start", "end")
    @classmethod
    def utc_bounds(cls, value: Optional[datetime]) -> Optional[datetime]:
        return None if value is None else to_utc(value)

    @model_validator(mode="after")
    def ordered(self) -> "TimeWindow":
        if self.start is None and self.end is None:
            raise ValueError("window needs at least one bound")
        if self.start is not None and self.end is not None and self.start >= self.end:
            raise ValueError(
                f"window start {format_utc(self.start)} must be before end {format_utc(self.end)}"
            )
        return self

    def contains(self, moment: datetime) -> bool:
        if self.start is not None and moment < self.start:
            return False
        if self.end is not None and moment >= self.end:
            return False
        return True

    def label(self) -> str:
        start = format_utc(self.start) if self.start else ""
        end = format_utc(self.end) if self.end else ""
        return f"{start}..{end}"

    @classmethod
    def parse(cls, text: str) -> "TimeWindow":
        """Parse the CLI form `START..END` (either side may be empty)."""
        if ".." not in text:
            raise ValueError(f"window {text!r} must look like START..END")
        start_text, end_text = text.split("..", 1)
        return cls(
            start=parse_utc(start_text) if start_text.strip() else None,
            end=parse_utc(end_text) if end_text.strip() else None,
        )


class PostQuery(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    application_terms: tuple[str, ...] = Field(..., min_length=1)
    attack_keywords: tuple[str, ...] = ()
    region: Optional[str] = None
    window: Optional[TimeWindow] = None

    @field_validator("application_terms", "attack_keywords")
    @classmethod
    def lowercase_terms(cls, values: tuple[str, ...]) -> tuple[str, ...]:
        cleaned = tuple(v.strip().lower().lstrip("#") for v in values)
        if any(not v for v in cleaned):
            raise ValueError("terms must be non-empty")
        return tuple(dict.fromkeys(cleaned))
