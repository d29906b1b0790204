# feasibility/models.py
# Attack-feasibility models (attack vector, attack potential, CVSS exploitability)
# and CAL determination. Tables are data; every operation here is a pure function.

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from domain.errors import ConfigurationError
from feasibility.ratings import AttackVector, CalLevel, FeasibilityRating, ImpactRating

POTENTIAL_PARAMETERS = (
    "elapsed_time",
    "expertise",
    "knowledge",
    "window_of_opportunity",
    "equipment",
)


# ---------- Rating bands ----------

class RatingBand(BaseModel):
    """Inclusive upper bound; `upper=None` is the terminal open band."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    upper: Optional[float] = None
    rating: FeasibilityRating


def _check_bands(bands: Sequence[RatingBand], ascending_ratings: bool) -> None:
    if not bands:
        raise ValueError("at least one rating band is required")
    if bands[-1].upper is not None:
        raise ValueError("last band must be open (upper: null)")
    uppers = [b.upper for b in bands[:-1]]
    if any(u is None for u in uppers):
        raise ValueError("only the last band may be open")
    if uppers and uppers[0] < 0:
        raise ValueError("band bounds must be non-negative")
    if any(b <= a for a, b in zip(uppers, uppers[1:])):
        raise ValueError("band bounds must be strictly increasing")
    ratings = [b.rating for b in bands]
    pairs = list(zip(ratings, ratings[1:]))
    if ascending_ratings and any(b < a for a, b in pairs):
        raise ValueError("band ratings must not decrease as bounds grow")
    if not ascending_ratings and any(b > a for a, b in pairs):
        raise ValueError("band ratings must not increase as bounds grow")


def band_lookup(value: float, bands: Sequence[RatingBand]) -> FeasibilityRating:
    """Rating of the first band whose inclusive upper bound is >= value."""
    for band in bands:
        if band.upper is None or value <= band.upper:
            return band.rating
    return bands[-1].rating


# ---------- Attack vector table ----------

class VectorFeasibilityTable(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    ratings: dict[AttackVector, FeasibilityRating]

    @model_validator(mode="after")
    def total(self) -> "VectorFeasibilityTable":
        missing = [v.value for v in AttackVector if v not in self.ratings]
        if missing:
            raise ValueError(f"vector table missing: {', '.join(missing)}")
        return self

    def __getitem__(self, vector: AttackVector) -> FeasibilityRating:
        return self.ratings[vector]

    def ordered(self) -> list[tuple[AttackVector, FeasibilityRating]]:
        return [(v, self.ratings[v]) for v in AttackVector]

    @classmethod
    def constant(cls, rating: FeasibilityRating) -> "VectorFeasibilityTable":
        return cls(ratings={v: rating for v in AttackVector})


# ---------- Attack potential ----------

@dataclass(frozen=True)
class AttackPotentialParams:
    """Level index per parameter into the configured weight rows."""
    elapsed_time: int
    expertise: int
    knowledge: int
    window_of_opportunity: int
    equipment: int


class PotentialWeightConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    elapsed_time: tuple[int, ...]
    expertise: tuple[int, ...]
    knowledge: tuple[int, ...]
    window_of_opportunity: tuple[int, ...]
    equipment: tuple[int, ...]
    rating_bands: tuple[RatingBand, ...]

    @field_validator(*POTENTIAL_PARAMETERS)
    @classmethod
    def row_shape(cls, row: tuple[int, ...]) -> tuple[int, ...]:
        if not row:
            raise ValueError("weight row must not be empty")
        if any(w < 0 for w in row):
            raise ValueError("weights must be non-negative")
        if any(b < a for a, b in zip(row, row[1:])):
            raise ValueError("weights must be non-decreasing within a row")
        return row

    @field_validator("rating_bands")
    @classmethod
    def bands_shape(cls, bands: tuple[RatingBand, ...]) -> tuple[RatingBand, ...]:
        _check_bands(bands, ascending_ratings=False)
        return bands

    def row(self, parameter: str) -> tuple[int, ...]:
        return getattr(self, parameter)


# ---------- CAL ----------

class CalMatrix(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    cells: dict[ImpactRating, dict[AttackVector, CalLevel]]

    @model_validator(mode="after")
    def well_formed(self) -> "CalMatrix":
        for impact in ImpactRating:
            row = self.cells.get(impact)
            if row is None or any(v not in row for v in AttackVector):
                raise ValueError(f"CAL matrix row '{impact.value}' is incomplete")
        for impact in ImpactRating:
            levels = [self.cells[impact][v] for v in AttackVector]
            if any(b < a for a, b in zip(levels, levels[1:])):
                raise ValueError(
                    f"CAL must not drop as the vector becomes more remote (impact {impact.value})"
                )
            if self.cells[impact][AttackVector.PHYSICAL] > CalLevel.CAL2:
                raise ValueError(f"physical attacks are capped at CAL2 (impact {impact.value})")
        impacts = list(ImpactRating)
        for vector in AttackVector:
            levels = [self.cells[i][vector] for i in impacts]
            if any(b < a for a, b in zip(levels, levels[1:])):
                raise ValueError(f"CAL must not drop as impact rises (vector {vector.value})")
        return self


# ---------- CVSS exploitability ----------

@dataclass(frozen=True)
class CvssExploitabilityParams:
    av_coeff: float
    ac_coeff: float
    pr_coeff: float
    ui_coeff: float
    scale: float = 8.22


@dataclass(frozen=True)
class CvssResult:
    score: float
    rating: FeasibilityRating


class CvssConfig(BaseModel):
    """Metric coefficients (CVSS v3 exploitability style) and rating bands."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    scale: float = Field(default=8.22, gt=0)
    attack_vector: dict[AttackVector, float]
    attack_complexity: dict[str, float]
    privileges_required: dict[str, float]
    user_interaction: dict[str, float]
    rating_bands: tuple[RatingBand, ...]

    @field_validator("attack_vector", "attack_complexity", "privileges_required", "user_interaction")
    @classmethod
    def coefficient_range(cls, values: dict) -> dict:
        for key, coeff in values.items():
            if not 0 < coeff <= 1:
                raise ValueError(f"coefficient {key}={coeff} outside (0, 1]")
        return values

    @field_validator("rating_bands")
    @classmethod
    def bands_shape(cls, bands: tuple[RatingBand, ...]) -> tuple[RatingBand, ...]:
        _check_bands(bands, ascending_ratings=True)
        return bands

    def params(self, vector: AttackVector, complexity: str, privileges: str,
               interaction: str) -> CvssExploitabilityParams:
        try:
            return CvssExploitabilityParams(
                av_coeff=self.attack_vector[vector],
                ac_coeff=self.attack_complexity[complexity],
                pr_coeff=self.privileges_required[privileges],
                ui_coeff=self.user_interaction[interaction],
                scale=self.scale,
            )
        except KeyError as exc:
            raise ConfigurationError(f"unknown CVSS metric value {exc.args[0]!r}") from None


# ---------- Operations ----------

def rate_attack_vector(vector: AttackVector, table: VectorFeasibilityTable) -> FeasibilityRating:
    return table[vector]


def compute_attack_potential(params: AttackPotentialParams, cfg: PotentialWeightConfig) -> int:
    """Sum of the five selected weights."""
    total = 0
    for name in POTENTIAL_PARAMETERS:
        level = getattr(params, name)
        row = cfg.row(name)
        if not 0 <= level < len(row):
            raise ConfigurationError(
                f"{name} level {level} out of bounds (0..{len(row) - 1})"
            )
        total += row[level]
    return total


def potential_to_rating(total: int, cfg: PotentialWeightConfig) -> FeasibilityRating:
    return band_lookup(total, cfg.rating_bands)


def determine_cal(impact: ImpactRating, vector: AttackVector, matrix: CalMatrix) -> CalLevel:
    return matrix.cells[impact][vector]


def cvss_exploitability(p: CvssExploitabilityParams,
                        bands: Sequence[RatingBand]) -> CvssResult:
    """score = scale * av * ac * pr * ui; higher score means higher feasibility."""
    for name in ("av_coeff", "ac_coeff", "pr_coeff", "ui_coeff", "scale"):
        value = getattr(p, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ConfigurationError(f"CVSS {name} must be positive, got {value!r}")
    score = p.scale * p.av_coeff * p.ac_coeff * p.pr_coeff * p.ui_coeff
    return CvssResult(score=score, rating=band_lookup(score, bands))
