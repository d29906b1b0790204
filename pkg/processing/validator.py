# processing/validator.py

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from pydantic import ValidationError

from domain.errors import ConfigurationError, KeywordDbError
from feasibility.config import load_feasibility_config
from ingestion.live_source import registered_sources
from pipeline.run_config import RunConfig, read_config_file
from storage.keyword_store import load_db


@dataclass(frozen=True)
class Diagnostic:
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


def _pydantic_diagnostics(exc: ValidationError) -> list[Diagnostic]:
    diagnostics = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"]) or "<root>"
        diagnostics.append(Diagnostic(location, error["msg"]))
    return diagnostics


def _path_entries(raw: dict) -> list[tuple[str, str]]:
    """(location, path) for every input file named in the raw config."""
    entries: list[tuple[str, str]] = []
    corpus = raw.get("corpus")
    if isinstance(corpus, str):
        corpus = [corpus]
    if isinstance(corpus, list):
        entries += [(f"corpus.{i}", p) for i, p in enumerate(corpus) if isinstance(p, str)]
    for key in ("keyword_db", "feasibility"):
        if isinstance(raw.get(key), str):
            entries.append((key, raw[key]))
    return entries


def _file_diagnostics(raw: dict, base_dir: Path) -> list[Diagnostic]:
    diagnostics = []
    for location, name in _path_entries(raw):
        path = Path(name)
        path = path if path.is_absolute() else base_dir / path
        if not path.is_file():
            diagnostics.append(Diagnostic(location, f"file not found: {path}"))
            continue
        try:
            if location == "keyword_db":
                load_db(path)
            elif location == "feasibility":
                load_feasibility_config(path)
        except (KeywordDbError, ConfigurationError, OSError) as exc:
            diagnostics.append(Diagnostic(location, str(exc)))
    return diagnostics


def validate_config(path: str | Path) -> list[Diagnostic]:
    """
    Collect every violation in a run configuration.

    Schema checks (pydantic), input files (existence and parseability)
    and live-source names are all reported; an empty list means the
    configuration is runnable. Only an unreadable config file raises.
    """
    path = Path(path).resolve()
    try:
        raw = read_config_file(path)
    except ConfigurationError as exc:
        return [Diagnostic("<file>", str(exc))]

    diagnostics: list[Diagnostic] = []
    try:
        RunConfig.model_validate(raw)
    except ValidationError as exc:
        diagnostics += _pydantic_diagnostics(exc)

    diagnostics += _file_diagnostics(raw, path.parent)

    live = raw.get("live_source")
    if isinstance(live, dict) and isinstance(live.get("name"), str):
        if live["name"] not in registered_sources():
            diagnostics.append(
                Diagnostic("live_source.name", f"unknown live source {live['name']!r}")
            )
    return diagnostics
