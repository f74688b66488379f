from __future__ import annotations

import math

import numpy as np
import pytest

from technometrics.errors import SearchFailure
from technometrics.evolution import (
    EVOLUTION_SCALE,
    MODE_EXACT,
    REFERENCE_CASES,
    InteractionType,
    classify_grade,
    classify_reference_cases,
    estimate,
    estimate_evolution,
    estimate_evolution_exact,
    unity_test,
)
from technometrics.series import PairedSeries
from technometrics.sigmoid import LogisticSearch

from .conftest import logistic_pair, make_series

HOST = [1.0 + 0.5 * k for k in range(12)]
YEARS = list(range(1950, 1962))
NO_DIAGNOSTIC = (None, None)


def power_pair(beta: float, scale: float = 0.5, host=HOST) -> PairedSeries:
    sub = [scale * h**beta for h in host]
    return PairedSeries(host=make_series("host", YEARS, host), sub=make_series("sub", YEARS, sub))


def test_identity_is_proportional_growth():
    result = estimate_evolution(power_pair(1.0, scale=1.0), logistic_fits=NO_DIAGNOSTIC)
    assert result.B == pytest.approx(1.0, abs=1e-12)
    assert result.fit.r2 == pytest.approx(1.0)
    assert result.grade == 2
    assert result.stage == "Growth"


def test_square_law_is_development():
    result = estimate_evolution(power_pair(2.0), logistic_fits=NO_DIAGNOSTIC)
    assert result.B == pytest.approx(2.0, abs=1e-10)
    assert result.lnA == pytest.approx(np.log(0.5), abs=1e-10)
    assert result.grade == 3
    assert result.scale_row.label == "High"


@pytest.mark.parametrize(
    "beta, grade",
    [(0.23, 1), (0.35, 1), (1.0, 2), (1.74, 3), (1.89, 3)],
)
def test_exact_power_laws_map_to_grades(beta, grade):
    result = estimate_evolution(power_pair(beta), logistic_fits=NO_DIAGNOSTIC)
    assert result.B == pytest.approx(beta, abs=1e-10)
    assert result.grade == grade


def test_unit_changes_leave_B_unchanged():
    base = estimate_evolution(power_pair(1.74), logistic_fits=NO_DIAGNOSTIC)
    rescaled = PairedSeries(
        host=make_series("host", YEARS, [5.0 * h for h in HOST]),
        sub=make_series("sub", YEARS, [3.0 * 0.5 * h**1.74 for h in HOST]),
    )
    result = estimate_evolution(rescaled, logistic_fits=NO_DIAGNOSTIC)
    assert result.B == pytest.approx(base.B, abs=1e-10)


def test_powering_the_host_divides_B():
    base = estimate_evolution(power_pair(1.74), logistic_fits=NO_DIAGNOSTIC)
    powered = PairedSeries(
        host=make_series("host", YEARS, [h**2 for h in HOST]),
        sub=make_series("sub", YEARS, [0.5 * h**1.74 for h in HOST]),
    )
    result = estimate_evolution(powered, logistic_fits=NO_DIAGNOSTIC)
    assert result.B == pytest.approx(base.B / 2.0, abs=1e-10)


@pytest.mark.parametrize(
    "B, se, n, grade",
    [
        (1.89, 0.12, 29, 3),
        (0.35, 0.02, 51, 1),
        (1.74, 0.11, 44, 3),
        (0.23, 0.01, 51, 1),
        (1.05, 0.10, 30, 2),
        (0.95, 0.10, 30, 2),
    ],
)
def test_classify_grade(B, se, n, grade):
    classification = classify_grade(B, se, n)
    assert classification.grade == grade
    assert classification.stage == EVOLUTION_SCALE[grade].stage
    assert classification.prediction == EVOLUTION_SCALE[grade].prediction


def test_grade_is_monotone_in_B():
    grades = [classify_grade(float(B), 0.1, 30).grade for B in np.linspace(0.2, 2.0, 181)]
    assert grades == sorted(grades)
    assert grades[0] == 1 and grades[-1] == 3


def test_degenerate_standard_error_uses_point_estimate():
    assert classify_grade(1.0000001, 0.0, 10).grade == 3
    assert classify_grade(0.9999999, 0.0, 10).grade == 1
    assert classify_grade(1.0, 0.0, 10).grade == 2


def test_classify_needs_four_points():
    with pytest.raises(ValueError):
        classify_grade(1.5, 0.1, 3)


def test_unity_test_at_one():
    t, p = unity_test(1.0, 0.1, 30)
    assert t == 0.0
    assert p == pytest.approx(1.0)


def test_reference_cases_reproduce_published_grades():
    for case, classification in classify_reference_cases():
        assert classification.grade == case.expected_grade, case.name
    assert len(REFERENCE_CASES) == 4


@pytest.mark.parametrize(
    "host, sub, expected",
    [
        ((100.0, 8.197, 0.3), (100.0, 14.197, 0.6), 2.0),
        ((100.0, 14.197, 0.6), (100.0, 8.197, 0.3), 0.5),
    ],
)
def test_small_value_regime_recovers_rate_ratio(host, sub, expected):
    pair = logistic_pair(range(0, 21), host=host, sub=sub)
    result = estimate_evolution(pair, logistic_fits=NO_DIAGNOSTIC)
    assert abs(result.B - expected) / expected < 0.05


def test_saturated_pair_raises_small_value_warning():
    pair = logistic_pair(range(0, 21), host=(100.0, 5.0, 0.5), sub=(100.0, 5.0, 0.5))
    result = estimate_evolution(pair)
    assert result.small_value_warning
    assert any("asymptote" in message for message in result.warnings)


@pytest.mark.parametrize(
    "times, host, sub",
    [
        (range(0, 11), (100.0, 5.0, 0.25), (100.0, 8.0, 0.5)),
        (range(0, 21), (100.0, 8.197, 0.3), (100.0, 14.197, 0.6)),
        (range(0, 31), (100.0, 5.0, 0.25), (50.0, 10.0, 0.5)),
    ],
    ids=["early", "small-values", "full-curve"],
)
def test_exact_mode_recovers_rate_ratio_on_any_window(times, host, sub):
    result = estimate_evolution_exact(logistic_pair(times, host=host, sub=sub))
    assert result.mode == MODE_EXACT
    assert result.B == pytest.approx(2.0, abs=1e-6)
    assert result.grade == 3
    host_fit, sub_fit = result.logistic_fits
    assert host_fit.K == pytest.approx(host[0], rel=1e-4)
    assert sub_fit.K == pytest.approx(sub[0], rel=1e-4)


def test_exact_mode_identical_curves_give_unity():
    pair = logistic_pair(range(0, 31), host=(100.0, 5.0, 0.25), sub=(100.0, 5.0, 0.25))
    result = estimate(pair, MODE_EXACT)
    assert result.B == pytest.approx(1.0, abs=1e-9)
    assert result.grade == 2


def test_exact_and_reduced_agree_for_small_values():
    pair = logistic_pair(range(0, 21), host=(100.0, 8.197, 0.3), sub=(100.0, 14.197, 0.6))
    reduced = estimate(pair, logistic_fits=NO_DIAGNOSTIC)
    exact = estimate(pair, MODE_EXACT)
    assert exact.B == pytest.approx(2.0, abs=1e-6)
    assert abs(reduced.B - exact.B) / exact.B < 0.05


def test_exact_mode_fails_without_curvature():
    times = list(range(0, 11))
    pair = PairedSeries(
        host=make_series("host", times, [math.exp(0.3 * t) for t in times]),
        sub=make_series("sub", times, [math.exp(0.6 * t) for t in times]),
    )
    with pytest.raises(SearchFailure, match="no curvature"):
        estimate_evolution_exact(pair)


def test_unconverged_logistic_search_is_reported():
    pair = logistic_pair(range(0, 21), host=(100.0, 5.0, 0.5), sub=(100.0, 5.0, 0.5))
    result = estimate_evolution(pair, search=LogisticSearch(max_iter=1))
    assert any("without reaching tolerance" in message for message in result.warnings)
    exact = estimate_evolution_exact(pair, search=LogisticSearch(max_iter=1))
    assert any("without reaching tolerance" in message for message in exact.warnings)


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        estimate(power_pair(2.0), "approximate")


def test_interaction_types():
    assert InteractionType.from_key(" Mutualism ") is InteractionType.MUTUALISM
    assert InteractionType.SYMBIOSIS.symbol == "(++,++)"
    assert InteractionType.PARASITISM.host_effect == "-"
    with pytest.raises(ValueError):
        InteractionType.from_key("predation")
