# pipeline/runner.py
# Run orchestration: the full analysis and the individual stage commands.
# Every command writes into a staging directory next to the output
# directory; files are moved into place only when the command succeeds.

from __future__ import annotations

import hashlib
import logging
import os
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterator, Optional

from domain.errors import (
    InsufficientDataError,
    MissingArtifactError,
    StageError,
    StaleArtifactError,
)
from domain.schemas import SocialPost, TimeWindow, format_utc
from feasibility.config import (
    DEFAULT_CONFIG_PATH,
    FeasibilityConfig,
    ThreatRating,
    load_feasibility_config,
    rate_scenario,
)
from finance.financial_model import FinancialResult, assess_financials
from ingestion.corpus import PostCollection, load_corpus
from ingestion.live_source import create_source, fetch_live
from ingestion.query import MatchedPost, query_posts
from pipeline.run_config import RunConfig, match_fingerprint, run_id, sai_fingerprint
from processing.keyword_db import AttackKeyword, KeywordDb, expand_keywords
from processing.sai import SaiEntry, compute_sai, split_insider_outsider
from processing.weight_tuning import TunedTable, tune_for_scenario
from reporting import tables
from reporting.chart import render_sai_chart
from reporting.summary import render_summary
from storage.keyword_store import dump_db, load_db, save_db
from storage.parquet_store import ParquetMatchStore

logger = logging.getLogger(__name__)

MATCHES_FILE = "matches.parquet"
SAI_JSON = "sai.json"


@dataclass(frozen=True)
class ReportBundle:
    run_id: str
    generated_at: str
    window: Optional[TimeWindow]
    post_count: int
    skipped: int
    matched_count: int
    sai: list[SaiEntry]
    insider: list[SaiEntry]
    outsider: list[SaiEntry]
    tuned: list[TunedTable]
    ratings: dict[str, ThreatRating]
    additions: list[AttackKeyword]
    keyword_db: KeywordDb
    financial: list[FinancialResult]
    financial_omitted: list[str]


@dataclass(frozen=True)
class RunContext:
    cfg: RunConfig
    run_id: str
    matches_key: str
    sai_key: str
    feasibility: FeasibilityConfig
    db: KeywordDb
    generated_at: str


# ---------- Output staging ----------

class StagedOutput:
    """
    Collects the files of one command in a staging directory and moves
    them into the output directory on success. On failure the staging
    directory is removed and the output directory is left untouched.
    """

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.written: list[str] = []
        self.staging: Optional[Path] = None

    def __enter__(self) -> "StagedOutput":
        self.out_dir.parent.mkdir(parents=True, exist_ok=True)
        self.staging = Path(
            tempfile.mkdtemp(prefix=f".{self.out_dir.name}.staging-", dir=self.out_dir.parent)
        )
        return self

    def path(self, name: str) -> Path:
        self.written.append(name)
        return self.staging / name

    def write_text(self, name: str, text: str) -> None:
        self.path(name).write_text(text, encoding="utf-8", newline="\n")

    def digests(self) -> dict[str, str]:
        return {
            name: hashlib.sha256((self.staging / name).read_bytes()).hexdigest()
            for name in sorted(self.written)
        }

    def __exit__(self, exc_type, exc, tb) -> bool:
        if exc_type is not None:
            shutil.rmtree(self.staging, ignore_errors=True)
            return False
        self.out_dir.mkdir(parents=True, exist_ok=True)
        for name in sorted(self.written):
            os.replace(self.staging / name, self.out_dir / name)
        shutil.rmtree(self.staging, ignore_errors=True)
        logger.info(f"Wrote {len(self.written)} file(s) to {self.out_dir}")
        return False


@contextmanager
def stage(name: str) -> Iterator[None]:
    logger.debug(f"Stage {name} started")
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        logger.error(f"Stage {name} failed: {exc}")
        raise StageError(name, exc) from exc
    logger.debug(f"Stage {name} finished")


# ---------- Stage building blocks ----------

def prepare(cfg: RunConfig, generated_at: datetime) -> RunContext:
    with stage("prepare"):
        feasibility = load_feasibility_config(cfg.feasibility_path or DEFAULT_CONFIG_PATH)
        db = load_db(cfg.keyword_db_path)
        rid = run_id(cfg)
        matches_key = match_fingerprint(cfg)
        sai_key = sai_fingerprint(cfg)
    logger.info(f"Run {rid}: {len(db)} keywords, {len(cfg.corpus)} corpus file(s)")
    return RunContext(cfg, rid, matches_key, sai_key, feasibility, db, format_utc(generated_at))


def load_posts(ctx: RunContext) -> PostCollection:
    cfg = ctx.cfg
    collection = PostCollection.of([])
    for path in cfg.corpus_paths:
        collection = collection.merge(load_corpus(path, strict=cfg.corpus_mode == "strict"))
    if cfg.live_source is not None:
        source = create_source(cfg.live_source.name, **cfg.live_source.options)
        collection = collection.merge(fetch_live(source, cfg.build_query(ctx.db.tags)))
    return collection


def matched_posts(ctx: RunContext, posts: PostCollection) -> list[MatchedPost]:
    matches = query_posts(posts, ctx.cfg.build_query(ctx.db.tags))
    logger.info(f"{len(matches)} of {len(posts)} posts match the query")
    return matches


def sai_tables(ctx: RunContext, matches: list[MatchedPost]) -> list[SaiEntry]:
    return compute_sai(matches, ctx.db, ctx.cfg.sai.weights, ctx.cfg.sai.granularity)


def tuning_scenarios(ctx: RunContext, sai: list[SaiEntry]) -> list[str]:
    if ctx.cfg.tuning.scenarios:
        return list(ctx.cfg.tuning.scenarios)
    return sorted(set(ctx.db.scenarios()) | {e.scenario for e in sai})


def tune_all(ctx: RunContext, sai: list[SaiEntry], scenarios: list[str]) -> list[TunedTable]:
    insider, outsider = split_insider_outsider(sai)
    base = ctx.feasibility.vector_table

    def tune(scenario: str) -> TunedTable:
        return tune_for_scenario(
            base, insider, outsider, scenario,
            ctx.cfg.tuning.thresholds, ctx.cfg.query.window,
        )

    # pure per scenario; map keeps the input order
    with ThreadPoolExecutor(max_workers=4) as pool:
        return list(pool.map(tune, scenarios))


def rate_tuned(ctx: RunContext, tuned: list[TunedTable]) -> dict[str, ThreatRating]:
    """
    Rate each tuned scenario on its dominant insider vector against the
    tuned table. Scenarios without insider signal are not rated.
    """
    ratings = {}
    for t in tuned:
        vector = t.factors.top_vector()
        if vector is None:
            continue
        ratings[t.scenario] = rate_scenario(
            ctx.feasibility, vector, ctx.cfg.tuning.impacts.get(t.scenario),
            vector_table=t.tuned,
        )
    return ratings


def expand(ctx: RunContext, matches: list[MatchedPost]) -> tuple[KeywordDb, list[AttackKeyword]]:
    query = ctx.cfg.query
    return expand_keywords(
        ctx.db, matches, ctx.cfg.keywords.params(), run_id=ctx.run_id,
        ignore=query.application_terms + query.application_categories,
    )


def scenario_posts(db: KeywordDb, matches: list[MatchedPost], scenario: str) -> list[SocialPost]:
    posts = []
    for match in matches:
        keywords = [db.get(t) for t in match.matched_keywords]
        if any(k is not None and k.scenario == scenario for k in keywords):
            posts.append(match.post)
    return posts


def needs_mined_prices(cfg: RunConfig) -> bool:
    return any(s.ppia is None and not s.price_samples for s in cfg.financial.values())


def assess_all(ctx: RunContext,
               matches: list[MatchedPost]) -> tuple[list[FinancialResult], list[str]]:
    results: list[FinancialResult] = []
    omitted: list[str] = []
    for label in sorted(ctx.cfg.financial):
        scenario = ctx.cfg.financial[label]
        try:
            results.append(
                assess_financials(label, scenario, scenario_posts(ctx.db, matches, label))
            )
        except InsufficientDataError as exc:
            logger.warning(f"Financials for {label} omitted: {exc}")
            omitted.append(label)
    return results, omitted


# ---------- Artifact I/O ----------

def _require(ctx: RunContext, name: str, producer: str) -> Path:
    path = ctx.cfg.output_path / name
    if not path.is_file():
        raise MissingArtifactError(name, producer)
    return path


def load_matches(ctx: RunContext) -> list[MatchedPost]:
    store = ParquetMatchStore(_require(ctx, MATCHES_FILE, "sai"))
    if store.inputs() != ctx.matches_key:
        raise StaleArtifactError(MATCHES_FILE, "sai")
    return store.load()


def load_sai(ctx: RunContext) -> list[SaiEntry]:
    text = _require(ctx, SAI_JSON, "sai").read_text(encoding="utf-8")
    producer_run, inputs, sai = tables.parse_sai_json(text)
    if inputs != ctx.sai_key:
        raise StaleArtifactError(SAI_JSON, "sai")
    if producer_run != ctx.run_id:
        logger.info(f"Reusing {SAI_JSON} from run {producer_run} (same inputs)")
    return sai


def write_sai(out: StagedOutput, ctx: RunContext, matches: list[MatchedPost],
              sai: list[SaiEntry]) -> None:
    insider, outsider = split_insider_outsider(sai)
    ParquetMatchStore(out.path(MATCHES_FILE)).write(matches, inputs=ctx.matches_key)
    out.write_text("sai.csv", tables.sai_csv(sai))
    out.write_text(
        SAI_JSON,
        tables.sai_json(ctx.run_id, ctx.sai_key, sai, insider, outsider,
                        ctx.cfg.sai.granularity, ctx.cfg.query.window),
    )
    out.write_text("sai_chart.svg", render_sai_chart(sai, ctx.cfg.sai.granularity))


def write_tuned(out: StagedOutput, ctx: RunContext, tuned: list[TunedTable],
                ratings: dict[str, ThreatRating]) -> None:
    out.write_text("tuned_tables.csv", tables.tuned_csv(tuned))
    out.write_text("tuned_tables.json", tables.tuned_json(ctx.run_id, tuned, ratings))


def write_keywords(out: StagedOutput, ctx: RunContext, db: KeywordDb,
                   added: list[AttackKeyword]) -> None:
    out.write_text("keyword_db.tsv", dump_db(db))
    out.write_text("keyword_additions.json", tables.keyword_additions_json(ctx.run_id, added))


def write_financial(out: StagedOutput, ctx: RunContext, results: list[FinancialResult],
                    omitted: list[str]) -> None:
    if results:
        out.write_text("financial.json", tables.financial_json(ctx.run_id, results, omitted))


def write_back(ctx: RunContext, db: KeywordDb, added: list[AttackKeyword]) -> None:
    if ctx.cfg.keywords.write_back and added:
        save_db(db, ctx.cfg.keyword_db_path)
        logger.info(f"Keyword DB {ctx.cfg.keyword_db_path} updated with {len(added)} keyword(s)")


# ---------- Commands ----------

def run_analyze(cfg: RunConfig, generated_at: datetime) -> ReportBundle:
    """
    Full workflow: load, query, SAI, insider/outsider split, keyword
    auto-learning, per-scenario tuning and financials.
    """
    ctx = prepare(cfg, generated_at)
    with StagedOutput(cfg.output_path) as out:
        with stage("load"):
            posts = load_posts(ctx)
        with stage("query"):
            matches = matched_posts(ctx, posts)
        with stage("sai"):
            sai = sai_tables(ctx, matches)
            insider, outsider = split_insider_outsider(sai)
        with stage("keywords"):
            db, added = expand(ctx, matches)
        with stage("tune"):
            tuned = tune_all(ctx, sai, tuning_scenarios(ctx, sai))
            ratings = rate_tuned(ctx, tuned)
        with stage("finance"):
            financial, omitted = assess_all(ctx, matches)

        bundle = ReportBundle(
            run_id=ctx.run_id,
            generated_at=ctx.generated_at,
            window=cfg.query.window,
            post_count=len(posts),
            skipped=posts.skipped,
            matched_count=len(matches),
            sai=sai,
            insider=insider,
            outsider=outsider,
            tuned=tuned,
            ratings=ratings,
            additions=added,
            keyword_db=db,
            financial=financial,
            financial_omitted=omitted,
        )

        with stage("report"):
            write_sai(out, ctx, matches, sai)
            write_tuned(out, ctx, tuned, ratings)
            write_keywords(out, ctx, db, added)
            write_financial(out, ctx, financial, omitted)
            out.write_text("summary.txt", render_summary(bundle))
            out.write_text("manifest.json", tables.to_json_text({
                "run_id": ctx.run_id,
                "generated_at": ctx.generated_at,
                "files": out.digests(),
            }))

    with stage("write-back"):
        write_back(ctx, db, added)
    return bundle


def run_sai(cfg: RunConfig, generated_at: datetime) -> list[SaiEntry]:
    ctx = prepare(cfg, generated_at)
    with StagedOutput(cfg.output_path) as out:
        with stage("load"):
            posts = load_posts(ctx)
        with stage("query"):
            matches = matched_posts(ctx, posts)
        with stage("sai"):
            sai = sai_tables(ctx, matches)
            write_sai(out, ctx, matches, sai)
    return sai


def run_tune(cfg: RunConfig, generated_at: datetime,
             scenario: Optional[str] = None) -> list[TunedTable]:
    ctx = prepare(cfg, generated_at)
    with StagedOutput(cfg.output_path) as out:
        with stage("tune"):
            sai = load_sai(ctx)
            scenarios = [scenario] if scenario else tuning_scenarios(ctx, sai)
            tuned = tune_all(ctx, sai, scenarios)
            write_tuned(out, ctx, tuned, rate_tuned(ctx, tuned))
    return tuned


def run_keywords_expand(cfg: RunConfig, generated_at: datetime) -> list[AttackKeyword]:
    ctx = prepare(cfg, generated_at)
    with StagedOutput(cfg.output_path) as out:
        with stage("keywords"):
            db, added = expand(ctx, load_matches(ctx))
            write_keywords(out, ctx, db, added)
    with stage("write-back"):
        write_back(ctx, db, added)
    return added


def run_finance(cfg: RunConfig, generated_at: datetime) -> list[FinancialResult]:
    ctx = prepare(cfg, generated_at)
    if not cfg.financial:
        logger.warning("No financial section in the configuration; nothing to compute")
        return []
    with StagedOutput(cfg.output_path) as out:
        with stage("finance"):
            matches = load_matches(ctx) if needs_mined_prices(cfg) else []
            results, omitted = assess_all(ctx, matches)
            write_financial(out, ctx, results, omitted)
    return results
