from __future__ import annotations

import math

import numpy as np
import pytest

from technometrics.errors import KTooSmall
from technometrics.regress import ols
from technometrics.sigmoid import LogisticSearch, fit_logistic, logistic, logit_series
from technometrics.synth import SynthConfig, generate_pair

from .conftest import logistic_series, make_series

TIMES = list(range(0, 21))


def test_logit_at_inflection_and_unit():
    K = 80.0
    series = make_series("x", [0, 1, 2], [K / 2, K / (1 + math.e), 1.0])
    logits = [z for _, z in logit_series(series, K)]
    assert logits[0] == pytest.approx(0.0, abs=1e-12)
    assert logits[1] == pytest.approx(1.0, abs=1e-12)


def test_logit_of_exact_logistic_is_a_line():
    series = logistic_series("x", TIMES, 100.0, 5.0, 0.5)
    points = logit_series(series, 100.0)
    fit = ols([t for t, _ in points], [z for _, z in points])
    assert fit.slope == pytest.approx(-0.5, abs=1e-10)
    assert fit.intercept == pytest.approx(5.0, abs=1e-9)
    assert max(abs(r) for r in fit.residuals) < 1e-10


def test_logit_rejects_small_asymptote():
    series = make_series("x", [0, 1, 2], [1.0, 2.0, 3.0])
    with pytest.raises(KTooSmall):
        logit_series(series, 3.0)


def test_noiseless_recovery():
    fit = fit_logistic(logistic_series("x", TIMES, 100.0, 5.0, 0.5))
    assert fit.converged
    assert fit.K == pytest.approx(100.0, rel=1e-3)
    assert fit.a == pytest.approx(5.0, rel=1e-3)
    assert fit.b == pytest.approx(0.5, rel=1e-3)
    assert fit.inflection_time == pytest.approx(10.0, rel=1e-3)
    assert fit.value_at_inflection() == pytest.approx(fit.K / 2, abs=1e-9)


def test_noisy_recovery_median_within_five_percent():
    errors = []
    for seed in range(100):
        cfg = SynthConfig(K_host=100.0, a_host=5.0, b_host=0.5, t_start=0, t_end=20, noise_sd=1.0, seed=seed)
        fit = fit_logistic(generate_pair(cfg).host)
        errors.append(abs(fit.K - 100.0) / 100.0)
    assert float(np.median(errors)) <= 0.05


def test_iteration_cap_reports_unconverged_search():
    fit = fit_logistic(logistic_series("x", TIMES, 100.0, 5.0, 0.5), LogisticSearch(max_iter=1))
    assert not fit.converged
    assert fit.iterations == 1
    assert len(fit.warnings) == 1
    assert "without reaching tolerance" in fit.warnings[0]
    assert fit_logistic(logistic_series("x", TIMES, 100.0, 5.0, 0.5)).warnings == ()


def test_decreasing_series_has_negative_rate():
    reversed_values = logistic(TIMES, 100.0, 5.0, 0.5)[::-1]
    fit = fit_logistic(make_series("x", TIMES, reversed_values.tolist()))
    assert fit.converged
    assert fit.b == pytest.approx(-0.5, rel=1e-3)
    assert fit.K == pytest.approx(100.0, rel=1e-3)


def test_time_shift_moves_location_only():
    base = fit_logistic(logistic_series("x", TIMES, 100.0, 5.0, 0.5))
    shifted_series = make_series("x", [t + 1900 for t in TIMES], logistic(TIMES, 100.0, 5.0, 0.5).tolist())
    shifted = fit_logistic(shifted_series)
    assert shifted.K == pytest.approx(base.K, rel=1e-6)
    assert shifted.b == pytest.approx(base.b, rel=1e-6)
    assert shifted.a == pytest.approx(base.a + base.b * 1900, rel=1e-6)


def test_value_scale_scales_asymptote():
    values = logistic(TIMES, 100.0, 5.0, 0.5)
    base = fit_logistic(make_series("x", TIMES, values.tolist()))
    scaled = fit_logistic(make_series("x", TIMES, (values * 7.0).tolist()))
    assert scaled.K == pytest.approx(7.0 * base.K, rel=1e-6)
    assert scaled.a == pytest.approx(base.a, rel=1e-6)
    assert scaled.b == pytest.approx(base.b, rel=1e-6)


def test_chosen_asymptote_beats_reference_candidate(rng):
    values = logistic(TIMES, 60.0, 4.0, 0.4) + rng.normal(0, 0.8, size=len(TIMES))
    values = np.clip(values, 0.05, None)
    series = make_series("x", TIMES, values.tolist())
    fit = fit_logistic(series)
    reference_K = 2 * series.max_value
    points = logit_series(series, reference_K)
    line = ols([t for t, _ in points], [z for _, z in points])
    reference_sse = float(np.sum((series.values - logistic(TIMES, reference_K, line.intercept, -line.slope)) ** 2))
    assert fit.K > series.max_value
    assert fit.sse <= reference_sse
