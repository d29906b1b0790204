# ingestion/live_source.py
# Extension point for live social sources. Nothing is enabled by default:
# a run only talks to a source when its config names one.

from __future__ import annotations

import logging
import threading
import weakref
from abc import ABC, abstractmethod
from typing import Any, Callable, Optional

import requests
from pydantic import ValidationError

from domain.errors import LiveSourceError, RateLimitedError
from domain.schemas import PostQuery, SocialPost, format_utc
from ingestion.corpus import PostCollection

logger = logging.getLogger(__name__)

DEFAULT_BACKOFF_S = 60.0


class LiveSource(ABC):
    """
    A source returning raw post records (dicts in corpus field layout).

    Callers serialize calls per instance unless the implementation sets
    `supports_parallel_calls = True`.
    """

    supports_parallel_calls: bool = False

    @abstractmethod
    def fetch_raw(self, query: PostQuery) -> list[dict[str, Any]]:
        """Return raw records; raise LiveSourceError / RateLimitedError on failure."""


_SOURCE_LOCKS: "weakref.WeakKeyDictionary[LiveSource, threading.Lock]" = weakref.WeakKeyDictionary()
_REGISTRY_LOCK = threading.Lock()
_REGISTRY: dict[str, Callable[..., LiveSource]] = {}


def register_source(name: str, factory: Callable[..., LiveSource]) -> None:
    with _REGISTRY_LOCK:
        _REGISTRY[name] = factory


def create_source(name: str, **options: Any) -> LiveSource:
    with _REGISTRY_LOCK:
        factory = _REGISTRY.get(name)
    if factory is None:
        raise LiveSourceError(f"no live source registered as {name!r}", retryable=False)
    return factory(**options)


def registered_sources() -> list[str]:
    with _REGISTRY_LOCK:
        return sorted(_REGISTRY)


def _call_lock(source: LiveSource) -> threading.Lock:
    with _REGISTRY_LOCK:
        lock = _SOURCE_LOCKS.get(source)
        if lock is None:
            lock = threading.Lock()
            _SOURCE_LOCKS[source] = lock
        return lock


def fetch_live(source: LiveSource, query: PostQuery) -> PostCollection:
    """
    Fetch and normalize posts from a live source.
    Records violating the SocialPost invariants are skipped and counted.
    """
    if source.supports_parallel_calls:
        raw = source.fetch_raw(query)
    else:
        with _call_lock(source):
            raw = source.fetch_raw(query)

    posts: list[SocialPost] = []
    seen: set[str] = set()
    skipped = 0
    for record in raw:
        try:
            post = SocialPost.model_validate(record)
        except (ValidationError, ValueError, TypeError) as exc:
            skipped += 1
            logger.warning(f"Live record skipped: {str(exc).splitlines()[0]}")
            continue
        if post.id in seen:
            skipped += 1
            logger.warning(f"Live record skipped: duplicate id {post.id!r}")
            continue
        seen.add(post.id)
        posts.append(post)

    logger.info(f"Fetched {len(posts)} live posts ({skipped} skipped)")
    return PostCollection.of(posts, skipped=skipped)


# ---------- HTTP/JSON source ----------

class HttpJsonSource(LiveSource):
    """
    Generic HTTP source: GET `url` with the query as parameters, expecting
    a JSON list of corpus-layout records (or {"posts": [...]}).
    """

    def __init__(self, url: str, timeout: float = 10.0,
                 headers: Optional[dict[str, str]] = None,
                 session: Optional[requests.Session] = None):
        self.url = url
        self.timeout = timeout
        self.headers = headers or {}
        self.session = session or requests.Session()

    @staticmethod
    def _params(query: PostQuery) -> dict[str, str]:
        params = {
            "terms": ",".join(query.application_terms),
            "keywords": ",".join(query.attack_keywords),
        }
        if query.region:
            params["region"] = query.region
        if query.window is not None:
            if query.window.start is not None:
                params["since"] = format_utc(query.window.start)
            if query.window.end is not None:
                params["until"] = format_utc(query.window.end)
        return params

    @staticmethod
    def _retry_after(response: requests.Response) -> float:
        value = response.headers.get("Retry-After")
        try:
            return max(float(value), 0.0) if value is not None else DEFAULT_BACKOFF_S
        except ValueError:
            return DEFAULT_BACKOFF_S

    def fetch_raw(self, query: PostQuery) -> list[dict[str, Any]]:
        try:
            response = self.session.get(
                self.url, params=self._params(query), headers=self.headers, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise LiveSourceError(f"live source unavailable: {exc}",
                                  retryable=True, retry_after=DEFAULT_BACKOFF_S) from exc

        if response.status_code in (429, 503):
            backoff = self._retry_after(response)
            logger.warning(f"Live source returned {response.status_code}, back off {backoff:g}s")
            raise RateLimitedError(backoff)

        try:
            response.raise_for_status()
            body = response.json()
        except (requests.RequestException, ValueError) as exc:
            raise LiveSourceError(f"live source error: {exc}", retryable=False) from exc

        records = body.get("posts", []) if isinstance(body, dict) else body
        if not isinstance(records, list):
            raise LiveSourceError("live source returned no record list", retryable=False)
        return records


register_source("http-json", HttpJsonSource)
