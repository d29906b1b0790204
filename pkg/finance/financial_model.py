# finance/financial_model.py
# Financial attack-feasibility model for insider attacks:
#   MV  = PAE * PPIA
#   PAE = VS * PEA (monopolistic) | MS * PEA (non-monopolistic)
#   BEP = FC * n / (PPIA - VCU)
#   FC  = FTEH * ch + SLD
# and the inverse FC = BEP * (PPIA - VCU) / n.

from __future__ import annotations

import logging
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from domain.errors import (
    CurrencyMismatchError,
    FinancialValidationError,
    InsufficientDataError,
    MarginError,
)
from domain.schemas import SocialPost
from feasibility.ratings import FeasibilityRating
from finance.money import Money, to_decimal
from finance.prices import estimate_ppia, extract_prices

logger = logging.getLogger(__name__)

# PAE at this multiple of the BEP or more rates high
HIGH_ZONE_MULTIPLE = 2


class MarketType(str, Enum):
    MONOPOLISTIC = "monopolistic"
    NON_MONOPOLISTIC = "non_monopolistic"


@dataclass(frozen=True)
class AttackerEstimate:
    count: int
    market: MarketType

    @property
    def basis(self) -> str:
        return "vehicle_sales" if self.market == MarketType.MONOPOLISTIC else "market_share"


# ---------- Equations ----------

def market_value(pae: int, ppia: Money) -> Money:
    if pae < 0:
        raise FinancialValidationError(f"PAE must be non-negative, got {pae}")
    return ppia * pae


def potential_attackers(vs_or_ms, pea, market: MarketType) -> AttackerEstimate:
    volume = to_decimal(vs_or_ms)
    share = to_decimal(pea)
    if not Decimal(0) <= share <= Decimal(1):
        raise FinancialValidationError(f"PEA must be within [0, 1], got {pea}")
    if volume < 0:
        raise FinancialValidationError(f"VS/MS must be non-negative, got {vs_or_ms}")
    count = int((volume * share).to_integral_value(rounding=ROUND_FLOOR))
    return AttackerEstimate(count=count, market=MarketType(market))


def fixed_cost(fteh, ch: Money, sld: Money) -> Money:
    hours = to_decimal(fteh)
    if hours < 0 or ch.is_negative() or sld.is_negative():
        raise FinancialValidationError("FTEH, ch and SLD must be non-negative")
    return ch * hours + sld


def _margin(n: int, ppia: Money, vcu: Money) -> Decimal:
    if n < 1:
        raise FinancialValidationError(f"competitor count n must be >= 1, got {n}")
    if ppia <= vcu:
        raise MarginError(ppia, vcu)
    return (ppia - vcu).amount


def break_even(fc: Money, n: int, ppia: Money, vcu: Money) -> int:
    """
    Whole units needed to cover FC when the market is shared by n adversaries.
    FC is accounted in whole currency units, like the reported adversary investment.
    """
    margin = _margin(n, ppia, vcu)
    if fc.currency != ppia.currency:
        raise CurrencyMismatchError(f"FC in {fc.currency}, PPIA in {ppia.currency}")
    units = (fc.floor_whole().amount * n / margin).to_integral_value(rounding=ROUND_CEILING)
    return int(units)


def financial_feasibility(pae: int, bep: int) -> FeasibilityRating:
    """
    Rating from the position in the break-even diagram: below the BEP the
    attack is unprofitable (low); the profitable zone is medium, high from
    HIGH_ZONE_MULTIPLE times the BEP.
    """
    if pae < bep:
        return FeasibilityRating.LOW
    if pae >= HIGH_ZONE_MULTIPLE * bep:
        return FeasibilityRating.HIGH
    return FeasibilityRating.MEDIUM


def max_adversary_investment(bep: int, ppia: Money, vcu: Money, n: int) -> Money:
    """Largest fixed cost (whole currency units) that still breaks even at `bep` units."""
    margin = _margin(n, ppia, vcu)
    if bep < 0:
        raise FinancialValidationError(f"BEP must be non-negative, got {bep}")
    investment = (Decimal(bep) * margin / n).to_integral_value(rounding=ROUND_FLOOR)
    return Money(investment, ppia.currency)


# ---------- Scenario ----------

class FinancialScenario(BaseModel):
    """Analyst inputs for one threat scenario; amounts are in `currency`."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    currency: str = Field(default="EUR", min_length=3, max_length=3)
    pae: Optional[int] = Field(default=None, ge=0)
    vs_or_ms: Optional[Decimal] = Field(default=None, ge=0)
    pea: Optional[Decimal] = Field(default=None, ge=0, le=1)
    market: MarketType = MarketType.MONOPOLISTIC
    ppia: Optional[Decimal] = Field(default=None, ge=0)
    price_samples: tuple[Decimal, ...] = ()
    vcu: Decimal = Field(..., ge=0)
    fteh: Decimal = Field(..., ge=0)
    ch: Decimal = Field(..., ge=0)
    sld: Decimal = Field(default=Decimal(0), ge=0)
    n: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def attacker_basis(self) -> "FinancialScenario":
        if self.pae is None and (self.vs_or_ms is None or self.pea is None):
            raise ValueError("give either pae or both vs_or_ms and pea")
        return self

    def money(self, amount) -> Money:
        return Money(amount, self.currency)


@dataclass(frozen=True)
class FinancialResult:
    scenario: str
    inputs: dict
    pae: int
    pae_basis: str
    ppia: Money
    ppia_source: str
    market_value: Money
    fixed_cost: Money
    break_even: int
    max_adversary_investment: Money
    profitable: bool
    feasibility: FeasibilityRating

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "inputs": self.inputs,
            "pae": self.pae,
            "pae_basis": self.pae_basis,
            "ppia": self.ppia.to_json(),
            "ppia_source": self.ppia_source,
            "market_value": self.market_value.to_json(),
            "fixed_cost": self.fixed_cost.to_json(),
            "break_even": self.break_even,
            "max_adversary_investment": self.max_adversary_investment.to_json(),
            "profitable": self.profitable,
            "feasibility": self.feasibility.value,
        }


def _inputs(s: FinancialScenario) -> dict:
    # echoed verbatim for auditability
    return s.model_dump(mode="json")


def resolve_ppia(s: FinancialScenario, posts: list[SocialPost]) -> tuple[Money, str]:
    if s.ppia is not None:
        return s.money(s.ppia), "configured"
    if s.price_samples:
        return estimate_ppia([s.money(p) for p in s.price_samples]), "price_samples"
    mined = extract_prices(posts, s.currency)
    if not mined:
        raise InsufficientDataError(f"no {s.currency} prices found in matched posts")
    return estimate_ppia(mined), f"mined:{len(mined)}"


def assess_financials(scenario_label: str, s: FinancialScenario,
                      posts: Optional[list[SocialPost]] = None) -> FinancialResult:
    """
    Run the whole financial workflow for one scenario. The adversary break-even
    volume is compared with the attacker estimate: PAE >= BEP puts the attack
    in the profitable zone.
    """
    if s.pae is not None:
        pae, basis = s.pae, "configured"
    else:
        estimate = potential_attackers(s.vs_or_ms, s.pea, s.market)
        pae, basis = estimate.count, estimate.basis

    ppia, source = resolve_ppia(s, posts or [])
    vcu = s.money(s.vcu)
    fc = fixed_cost(s.fteh, s.money(s.ch), s.money(s.sld))
    bep = break_even(fc, s.n, ppia, vcu)

    result = FinancialResult(
        scenario=scenario_label,
        inputs=_inputs(s),
        pae=pae,
        pae_basis=basis,
        ppia=ppia,
        ppia_source=source,
        market_value=market_value(pae, ppia),
        fixed_cost=fc,
        break_even=bep,
        max_adversary_investment=max_adversary_investment(pae, ppia, vcu, s.n),
        profitable=pae >= bep,
        feasibility=financial_feasibility(pae, bep),
    )
    logger.info(
        f"{scenario_label}: MV={result.market_value} FC={fc} BEP={bep} "
        f"max investment={result.max_adversary_investment}"
    )
    return result
