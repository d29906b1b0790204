# processing/weight_tuning.py
# Per-scenario re-tuning of the attack-vector feasibility table from insider SAI evidence.

from __future__ import annotations

import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from domain.schemas import AttackerClass, TimeWindow
from feasibility.models import VectorFeasibilityTable
from feasibility.ratings import AttackVector
from processing.sai import SaiEntry

TuningMode = Literal["tuned", "outsider_passthrough", "no_data"]


class TuningThresholds(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    major_share: float = Field(default=0.5, gt=0, le=1)  # +2 steps
    minor_share: float = Field(default=0.2, gt=0, le=1)  # +1 step

    @model_validator(mode="after")
    def ordered(self) -> "TuningThresholds":
        if self.minor_share > self.major_share:
            raise ValueError("minor_share must not exceed major_share")
        return self

    def steps(self, share: float) -> int:
        if share >= self.major_share:
            return 2
        if share >= self.minor_share:
            return 1
        return 0


class CorrectiveFactors(BaseModel):
    """Score share per attack vector; sums to 1, or all zero when there is no data."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    shares: dict[AttackVector, float]

    @model_validator(mode="after")
    def normalized(self) -> "CorrectiveFactors":
        missing = [v.value for v in AttackVector if v not in self.shares]
        if missing:
            raise ValueError(f"factors missing: {', '.join(missing)}")
        values = list(self.shares.values())
        if any(not 0.0 <= s <= 1.0 for s in values):
            raise ValueError("shares must lie in [0, 1]")
        total = math.fsum(values)
        if total != 0.0 and abs(total - 1.0) > 1e-9:
            raise ValueError(f"shares must sum to 1 or be all zero, got {total:g}")
        return self

    @classmethod
    def zero(cls) -> "CorrectiveFactors":
        return cls(shares={v: 0.0 for v in AttackVector})

    def is_empty(self) -> bool:
        return all(s == 0.0 for s in self.shares.values())

    def __getitem__(self, vector: AttackVector) -> float:
        return self.shares[vector]

    def top_vector(self) -> Optional[AttackVector]:
        if self.is_empty():
            return None
        return min(AttackVector, key=lambda v: (-self.shares[v], v.rank))


class TunedTable(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    scenario: str
    base: VectorFeasibilityTable
    tuned: VectorFeasibilityTable
    factors: CorrectiveFactors
    mode: TuningMode
    window: Optional[TimeWindow] = None


def corrective_factors(insider_sai: list[SaiEntry], scenario: str) -> CorrectiveFactors:
    entries = [
        e for e in insider_sai
        if e.scenario == scenario and e.attacker_class == AttackerClass.INSIDER
    ]
    total = math.fsum(e.raw_score for e in entries)
    if total <= 0.0:
        return CorrectiveFactors.zero()
    return CorrectiveFactors(
        shares={
            v: math.fsum(e.raw_score for e in entries if e.dominant_vector == v) / total
            for v in AttackVector
        }
    )


def tune_table(
    base: VectorFeasibilityTable,
    f: CorrectiveFactors,
    thresholds: TuningThresholds = TuningThresholds(),
) -> VectorFeasibilityTable:
    """Raise-only: a vector's rating steps up with its share, clamped at high."""
    if f.is_empty():
        return base
    return VectorFeasibilityTable(
        ratings={v: base[v].step_up(thresholds.steps(f[v])) for v in AttackVector}
    )


def tune_for_scenario(
    base: VectorFeasibilityTable,
    insider_sai: list[SaiEntry],
    outsider_sai: list[SaiEntry],
    scenario: str,
    thresholds: TuningThresholds = TuningThresholds(),
    window: Optional[TimeWindow] = None,
) -> TunedTable:
    has_insider = any(e.scenario == scenario for e in insider_sai)
    has_outsider = any(e.scenario == scenario for e in outsider_sai)

    if has_outsider and not has_insider:
        # the standard's weights stand for outsider threats
        return TunedTable(
            scenario=scenario, base=base, tuned=base, factors=CorrectiveFactors.zero(),
            mode="outsider_passthrough", window=window,
        )

    factors = corrective_factors(insider_sai, scenario)
    return TunedTable(
        scenario=scenario,
        base=base,
        tuned=tune_table(base, factors, thresholds),
        factors=factors,
        mode="no_data" if factors.is_empty() else "tuned",
        window=window,
    )
