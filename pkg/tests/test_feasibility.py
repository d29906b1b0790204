# tests/test_feasibility.py

import itertools
from dataclasses import replace

import pytest
from pydantic import ValidationError

from domain.errors import ConfigurationError
from feasibility.config import load_feasibility_config, rate_scenario
from feasibility.models import (
    POTENTIAL_PARAMETERS,
    AttackPotentialParams,
    CalMatrix,
    CvssExploitabilityParams,
    RatingBand,
    VectorFeasibilityTable,
    compute_attack_potential,
    cvss_exploitability,
    determine_cal,
    potential_to_rating,
    rate_attack_vector,
)
from feasibility.ratings import AttackVector, CalLevel, FeasibilityRating, ImpactRating

CFG = load_feasibility_config()


# ---------- Attack vector ----------

def test_default_vector_table():
    assert rate_attack_vector(AttackVector.NETWORK, CFG.vector_table) == FeasibilityRating.HIGH
    assert rate_attack_vector(AttackVector.PHYSICAL, CFG.vector_table) == FeasibilityRating.VERY_LOW


def test_constant_table():
    table = VectorFeasibilityTable.constant(FeasibilityRating.MEDIUM)
    assert all(rate_attack_vector(v, table) == FeasibilityRating.MEDIUM for v in AttackVector)


def test_incomplete_vector_table_rejected():
    with pytest.raises(ValidationError):
        VectorFeasibilityTable(ratings={AttackVector.NETWORK: FeasibilityRating.HIGH})


# ---------- Attack potential ----------

def test_attack_potential_minimum_is_zero():
    params = AttackPotentialParams(0, 0, 0, 0, 0)
    assert compute_attack_potential(params, CFG.attack_potential) == 0
    assert potential_to_rating(0, CFG.attack_potential) == FeasibilityRating.HIGH


def test_attack_potential_hand_sum():
    # <=1 week, expert, restricted, moderate window, specialized equipment
    params = AttackPotentialParams(
        elapsed_time=1, expertise=2, knowledge=1, window_of_opportunity=2, equipment=1
    )
    assert compute_attack_potential(params, CFG.attack_potential) == 18
    assert potential_to_rating(18, CFG.attack_potential) == FeasibilityRating.LOW


def test_attack_potential_maximum():
    cfg = CFG.attack_potential
    levels = {name: len(cfg.row(name)) - 1 for name in POTENTIAL_PARAMETERS}
    total = compute_attack_potential(AttackPotentialParams(**levels), cfg)
    assert total == 19 + 8 + 11 + 10 + 9
    assert potential_to_rating(total, cfg) == FeasibilityRating.VERY_LOW


def test_level_out_of_bounds_names_parameter():
    with pytest.raises(ConfigurationError, match="expertise"):
        compute_attack_potential(AttackPotentialParams(0, 9, 0, 0, 0), CFG.attack_potential)


@pytest.mark.parametrize(
    "total, expected",
    [
        (9, FeasibilityRating.HIGH),
        (10, FeasibilityRating.MEDIUM),
        (13, FeasibilityRating.MEDIUM),
        (14, FeasibilityRating.LOW),
        (19, FeasibilityRating.LOW),
        (20, FeasibilityRating.VERY_LOW),
        (200, FeasibilityRating.VERY_LOW),
    ],
)
def test_band_boundaries_are_inclusive(total, expected):
    assert potential_to_rating(total, CFG.attack_potential) == expected


def test_bands_total_and_monotone_over_sums():
    ratings = [potential_to_rating(s, CFG.attack_potential) for s in range(201)]
    assert all(isinstance(r, FeasibilityRating) for r in ratings)
    assert all(b <= a for a, b in zip(ratings, ratings[1:]))


def test_single_parameter_increase_never_raises_feasibility():
    cfg = CFG.attack_potential
    ranges = [range(len(cfg.row(name))) for name in POTENTIAL_PARAMETERS]
    for levels in itertools.product(*ranges):
        params = AttackPotentialParams(*levels)
        rating = potential_to_rating(compute_attack_potential(params, cfg), cfg)
        for index, name in enumerate(POTENTIAL_PARAMETERS):
            if levels[index] + 1 >= len(cfg.row(name)):
                continue
            harder = replace(params, **{name: levels[index] + 1})
            assert potential_to_rating(compute_attack_potential(harder, cfg), cfg) <= rating


def test_decreasing_weight_row_rejected():
    raw = CFG.attack_potential.model_dump()
    raw["expertise"] = (0, 6, 3, 8)
    with pytest.raises(ValidationError):
        type(CFG.attack_potential).model_validate(raw)


def test_open_band_must_be_last():
    raw = CFG.attack_potential.model_dump()
    raw["rating_bands"] = [{"upper": None, "rating": "high"}, {"upper": 9, "rating": "low"}]
    with pytest.raises(ValidationError):
        type(CFG.attack_potential).model_validate(raw)


# ---------- CAL ----------

def test_cal_examples():
    assert determine_cal(ImpactRating.SEVERE, AttackVector.PHYSICAL, CFG.cal_matrix) == CalLevel.CAL2
    assert determine_cal(ImpactRating.NEGLIGIBLE, AttackVector.PHYSICAL, CFG.cal_matrix) == CalLevel.CAL1
    assert determine_cal(ImpactRating.SEVERE, AttackVector.NETWORK, CFG.cal_matrix) == CalLevel.CAL4


def test_cal_physical_cap_and_monotonicity():
    for impact in ImpactRating:
        assert determine_cal(impact, AttackVector.PHYSICAL, CFG.cal_matrix) <= CalLevel.CAL2
        row = [determine_cal(impact, v, CFG.cal_matrix) for v in AttackVector]
        assert row == sorted(row)
    for vector in AttackVector:
        column = [determine_cal(i, vector, CFG.cal_matrix) for i in ImpactRating]
        assert column == sorted(column)


def test_cal_matrix_rejects_physical_above_cap():
    cells = CFG.cal_matrix.model_dump()["cells"]
    cells[ImpactRating.SEVERE][AttackVector.PHYSICAL] = CalLevel.CAL3
    with pytest.raises(ValidationError):
        CalMatrix(cells=cells)


# ---------- CVSS ----------

def test_cvss_identity():
    bands = CFG.cvss.rating_bands
    result = cvss_exploitability(CvssExploitabilityParams(1, 1, 1, 1, scale=1), bands)
    assert result.score == 1.0


def test_cvss_network_low_none_none():
    params = CFG.cvss.params(AttackVector.NETWORK, "low", "none", "none")
    result = cvss_exploitability(params, CFG.cvss.rating_bands)
    assert result.score == pytest.approx(3.887042775, abs=1e-9)
    assert result.rating == FeasibilityRating.HIGH


def test_cvss_halving_a_coefficient_halves_score():
    bands = CFG.cvss.rating_bands
    full = cvss_exploitability(CvssExploitabilityParams(0.85, 0.77, 0.85, 0.85), bands)
    half = cvss_exploitability(CvssExploitabilityParams(0.85, 0.385, 0.85, 0.85), bands)
    assert half.score == pytest.approx(full.score / 2, rel=1e-12)


def test_cvss_rejects_non_positive_coefficient():
    with pytest.raises(ConfigurationError):
        cvss_exploitability(CvssExploitabilityParams(0.85, 0.0, 0.85, 0.85), CFG.cvss.rating_bands)


def test_cvss_unknown_metric_value():
    with pytest.raises(ConfigurationError):
        CFG.cvss.params(AttackVector.LOCAL, "trivial", "none", "none")


def test_cvss_bands_must_ascend():
    with pytest.raises(ValidationError):
        type(CFG.cvss)(
            attack_vector={v: 0.5 for v in AttackVector},
            attack_complexity={"low": 0.77},
            privileges_required={"none": 0.85},
            user_interaction={"none": 0.85},
            rating_bands=(
                RatingBand(upper=1.0, rating=FeasibilityRating.HIGH),
                RatingBand(upper=None, rating=FeasibilityRating.LOW),
            ),
        )


# ---------- Scenario rating ----------

def test_rate_scenario_combines_models():
    rating = rate_scenario(
        CFG,
        AttackVector.PHYSICAL,
        ImpactRating.SEVERE,
        potential=AttackPotentialParams(1, 2, 1, 2, 1),
        cvss_metrics=("low", "none", "none"),
    )
    assert rating.vector_rating == FeasibilityRating.VERY_LOW
    assert rating.potential == 18
    assert rating.potential_rating == FeasibilityRating.LOW
    assert rating.cvss_rating == FeasibilityRating.VERY_LOW
    assert rating.cal == CalLevel.CAL2


def test_rate_scenario_with_tuned_table():
    tuned = VectorFeasibilityTable.constant(FeasibilityRating.HIGH)
    rating = rate_scenario(CFG, AttackVector.PHYSICAL, ImpactRating.MAJOR, vector_table=tuned)
    assert rating.vector_rating == FeasibilityRating.HIGH
    assert rating.potential is None and rating.cvss_score is None


def test_rate_scenario_without_impact_has_no_cal():
    rating = rate_scenario(CFG, AttackVector.LOCAL)
    assert rating.vector_rating == FeasibilityRating.LOW
    assert rating.cal is None
