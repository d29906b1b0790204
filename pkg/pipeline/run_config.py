# pipeline/run_config.py
# Run configuration: one YAML file validated by pydantic. Relative paths
# resolve against the directory holding the config file.

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from domain.errors import ConfigurationError
from domain.schemas import PostQuery, TimeWindow
from feasibility.ratings import ImpactRating
from finance.financial_model import FinancialScenario
from processing.keyword_db import ExpansionParams
from processing.sai import SaiWeights
from processing.weight_tuning import TuningThresholds


class QuerySection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    application_terms: tuple[str, ...] = Field(..., min_length=1)
    # accepted as extra application terms
    application_categories: tuple[str, ...] = ()
    region: Optional[str] = None
    window: Optional[TimeWindow] = None


class SaiSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    weights: SaiWeights = SaiWeights()
    granularity: Literal["scenario", "keyword"] = "scenario"


class KeywordSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    min_cooccurrence: int = Field(default=3, ge=1)
    min_support_fraction: float = Field(default=0.05, ge=0, le=1)
    write_back: bool = False

    def params(self) -> ExpansionParams:
        return ExpansionParams(self.min_cooccurrence, self.min_support_fraction)


class TuningSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    thresholds: TuningThresholds = TuningThresholds()
    # analyst's threat-scenario list; empty means every scenario in the keyword DB and SAI
    scenarios: tuple[str, ...] = ()
    # impact rating per scenario; scenarios without one get no CAL
    impacts: dict[str, ImpactRating] = {}


class LiveSourceSection(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    options: dict[str, Any] = {}


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    corpus: tuple[Path, ...] = ()
    corpus_mode: Literal["strict", "lenient"] = "strict"
    keyword_db: Path
    feasibility: Optional[Path] = None
    query: QuerySection
    sai: SaiSection = SaiSection()
    keywords: KeywordSection = KeywordSection()
    tuning: TuningSection = TuningSection()
    financial: dict[str, FinancialScenario] = {}
    live_source: Optional[LiveSourceSection] = None
    output_dir: Path = Path("out")

    # set by load_run_config, not part of the file
    base_dir: Path = Field(default=Path("."), exclude=True)

    def resolve(self, path: Path) -> Path:
        return path if path.is_absolute() else (self.base_dir / path)

    @property
    def corpus_paths(self) -> list[Path]:
        return [self.resolve(p) for p in self.corpus]

    @property
    def keyword_db_path(self) -> Path:
        return self.resolve(self.keyword_db)

    @property
    def feasibility_path(self) -> Optional[Path]:
        return self.resolve(self.feasibility) if self.feasibility else None

    @property
    def output_path(self) -> Path:
        return self.resolve(self.output_dir)

    def build_query(self, attack_keywords: tuple[str, ...]) -> PostQuery:
        return PostQuery(
            application_terms=self.query.application_terms + self.query.application_categories,
            attack_keywords=attack_keywords,
            region=self.query.region,
            window=self.query.window,
        )

    def with_overrides(self, window: Optional[TimeWindow] = None,
                       output_dir: Optional[Path] = None) -> "RunConfig":
        update: dict[str, Any] = {}
        if window is not None:
            update["query"] = self.query.model_copy(update={"window": window})
        if output_dir is not None:
            update["output_dir"] = output_dir.resolve()
        return self.model_copy(update=update)


def read_config_file(path: str | Path) -> dict:
    """Raw YAML mapping. OSError propagates (unreadable file)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: not valid YAML ({exc})") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path}: expected a mapping at top level")
    return raw


def load_run_config(path: str | Path) -> RunConfig:
    path = Path(path).resolve()
    raw = read_config_file(path)
    try:
        cfg = RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    return cfg.model_copy(update={"base_dir": path.parent})


# ---------- Run id ----------

def file_digest(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def run_id(cfg: RunConfig) -> str:
    """
    Content hash of the configuration and every input file. Paths are replaced
    by their content digests so the id does not depend on where files live.
    """
    payload = cfg.model_dump(mode="json", exclude={"output_dir", "base_dir"})
    payload["corpus"] = [file_digest(p) for p in cfg.corpus_paths]
    payload["keyword_db"] = file_digest(cfg.keyword_db_path)
    payload["feasibility"] = file_digest(cfg.feasibility_path) if cfg.feasibility_path else None
    return _short_hash(payload)


def _short_hash(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def match_fingerprint(cfg: RunConfig) -> str:
    """Hash of everything the matched posts depend on (window included)."""
    payload = cfg.model_dump(mode="json", include={"corpus_mode", "query", "live_source"})
    payload["corpus"] = [file_digest(p) for p in cfg.corpus_paths]
    payload["keyword_db"] = file_digest(cfg.keyword_db_path)
    return _short_hash(payload)


def sai_fingerprint(cfg: RunConfig) -> str:
    return _short_hash({
        "matches": match_fingerprint(cfg),
        "sai": cfg.sai.model_dump(mode="json"),
    })
