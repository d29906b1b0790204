# feasibility/config.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import yaml
from pydantic import BaseModel, ConfigDict, ValidationError

from domain.errors import ConfigurationError
from feasibility.models import (
    AttackPotentialParams,
    CalMatrix,
    CvssConfig,
    PotentialWeightConfig,
    VectorFeasibilityTable,
    compute_attack_potential,
    cvss_exploitability,
    determine_cal,
    potential_to_rating,
    rate_attack_vector,
)
from feasibility.ratings import AttackVector, CalLevel, FeasibilityRating, ImpactRating

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "feasibility.yaml"


class FeasibilityConfig(BaseModel):
    """All feasibility tables in one place."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    vector_table: VectorFeasibilityTable
    attack_potential: PotentialWeightConfig
    cal_matrix: CalMatrix
    cvss: CvssConfig


def load_feasibility_config(path: str | Path = DEFAULT_CONFIG_PATH) -> FeasibilityConfig:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigurationError(f"{path}: not valid YAML ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path}: expected a mapping at top level")
    raw.pop("notes", None)
    try:
        cfg = FeasibilityConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    logger.debug(f"Loaded feasibility tables from {path}")
    return cfg


# ---------- Scenario rating ----------

@dataclass(frozen=True)
class ThreatRating:
    vector_rating: FeasibilityRating
    potential: Optional[int]
    potential_rating: Optional[FeasibilityRating]
    cvss_score: Optional[float]
    cvss_rating: Optional[FeasibilityRating]
    cal: Optional[CalLevel]


def rate_scenario(
    cfg: FeasibilityConfig,
    vector: AttackVector,
    impact: Optional[ImpactRating] = None,
    potential: Optional[AttackPotentialParams] = None,
    cvss_metrics: Optional[tuple[str, str, str]] = None,
    vector_table: Optional[VectorFeasibilityTable] = None,
) -> ThreatRating:
    """
    Rate one threat scenario with every configured model.
    `cvss_metrics` is (attack_complexity, privileges_required, user_interaction).
    `vector_table` overrides the configured table (e.g. a tuned one).
    Without an impact rating no CAL is determined.
    """
    total = compute_attack_potential(potential, cfg.attack_potential) if potential else None
    cvss = None
    if cvss_metrics is not None:
        params = cfg.cvss.params(vector, *cvss_metrics)
        cvss = cvss_exploitability(params, cfg.cvss.rating_bands)
    return ThreatRating(
        vector_rating=rate_attack_vector(vector, vector_table or cfg.vector_table),
        potential=total,
        potential_rating=(
            potential_to_rating(total, cfg.attack_potential) if total is not None else None
        ),
        cvss_score=cvss.score if cvss else None,
        cvss_rating=cvss.rating if cvss else None,
        cal=determine_cal(impact, vector, cfg.cal_matrix) if impact is not None else None,
    )
