# reporting/tables.py
# Machine-readable report tables. CSV via pandas, JSON with sorted keys.
# Generation time never appears here so reruns are byte-identical.

from __future__ import annotations

import json
from typing import Optional

import pandas as pd

from domain.schemas import TimeWindow, format_utc
from feasibility.config import ThreatRating
from feasibility.ratings import AttackVector
from finance.financial_model import FinancialResult
from processing.keyword_db import AttackKeyword
from processing.sai import SaiEntry
from processing.weight_tuning import TunedTable

FLOAT_FORMAT = "%.6f"

SAI_COLUMNS = [
    "rank",
    "scenario",
    "keyword_tags",
    "attacker_class",
    "dominant_vector",
    "post_count",
    "raw_score",
    "probability",
]

TUNED_COLUMNS = ["scenario", "mode", "vector", "base", "tuned", "factor"]


def to_json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _window_label(window: Optional[TimeWindow]) -> Optional[str]:
    return window.label() if window else None


# ---------- SAI ----------

def sai_csv(sai: list[SaiEntry]) -> str:
    rows = [
        {
            "rank": rank,
            "scenario": e.scenario,
            "keyword_tags": " ".join(e.keyword_tags),
            "attacker_class": e.attacker_class.value,
            "dominant_vector": e.dominant_vector.value,
            "post_count": e.post_count,
            "raw_score": e.raw_score,
            "probability": e.probability,
        }
        for rank, e in enumerate(sai, start=1)
    ]
    return _csv(pd.DataFrame(rows, columns=SAI_COLUMNS))


def sai_json(run_id: str, inputs: str, sai: list[SaiEntry], insider: list[SaiEntry],
             outsider: list[SaiEntry], granularity: str,
             window: Optional[TimeWindow]) -> str:
    # full float precision: the tune stage reads these scores back
    return to_json_text({
        "run_id": run_id,
        "inputs": inputs,
        "granularity": granularity,
        "window": _window_label(window),
        "entries": [e.model_dump(mode="json") for e in sai],
        "insider": sorted({e.scenario for e in insider}),
        "outsider": sorted({e.scenario for e in outsider}),
    })


def parse_sai_json(text: str) -> tuple[str, Optional[str], list[SaiEntry]]:
    """(producing run id, input fingerprint, entries)."""
    payload = json.loads(text)
    entries = [SaiEntry.model_validate(e) for e in payload["entries"]]
    return payload["run_id"], payload.get("inputs"), entries


# ---------- Tuned tables ----------

def tuned_csv(tables: list[TunedTable]) -> str:
    rows = [
        {
            "scenario": t.scenario,
            "mode": t.mode,
            "vector": v.value,
            "base": t.base[v].value,
            "tuned": t.tuned[v].value,
            "factor": t.factors[v],
        }
        for t in tables
        for v in AttackVector
    ]
    return _csv(pd.DataFrame(rows, columns=TUNED_COLUMNS))


def _rating(rating: Optional[ThreatRating], vector: Optional[AttackVector]) -> Optional[dict]:
    if rating is None or vector is None:
        return None
    return {
        "vector": vector.value,
        "feasibility": rating.vector_rating.value,
        "cal": rating.cal.value if rating.cal else None,
    }


def tuned_json(run_id: str, tables: list[TunedTable],
               ratings: Optional[dict[str, ThreatRating]] = None) -> str:
    ratings = ratings or {}
    return to_json_text({
        "run_id": run_id,
        "tables": [
            {
                "scenario": t.scenario,
                "mode": t.mode,
                "window": _window_label(t.window),
                "top_vector": t.factors.top_vector().value if t.factors.top_vector() else None,
                "base": {v.value: t.base[v].value for v in AttackVector},
                "tuned": {v.value: t.tuned[v].value for v in AttackVector},
                "factors": {v.value: t.factors[v] for v in AttackVector},
                "rating": _rating(ratings.get(t.scenario), t.factors.top_vector()),
            }
            for t in tables
        ],
    })


# ---------- Keywords / financials ----------

def keyword_additions_json(run_id: str, added: list[AttackKeyword]) -> str:
    return to_json_text({
        "run_id": run_id,
        "added": [
            {
                "tag": k.tag,
                "scenario": k.scenario,
                "attacker_class": k.attacker_class.value,
                "vector": k.vector.value,
                "parent_tag": k.parent_tag,
                "added_at": format_utc(k.added_at),
            }
            for k in added
        ],
    })


def financial_json(run_id: str, results: list[FinancialResult], omitted: list[str]) -> str:
    return to_json_text({
        "run_id": run_id,
        "scenarios": [r.to_json() for r in results],
        "omitted": sorted(omitted),
    })
