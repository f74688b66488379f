"""Evolutionary coefficient of growth B and the three-grade evolution scale.

B is the slope of ln P on ln H (subsystem P against host H).  Grades:

    1 Low      B < 1   Underdevelopment
    2 Average  B = 1   Growth
    3 High     B > 1   Development

Grade 2 means "B = 1 is not rejected" at the chosen significance level.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from .errors import FitError, SearchFailure
from .regress import OlsFit, ols, t_sf_two_sided
from .series import PairedSeries, TimeSeries, log_transform
from .sigmoid import LogisticFit, LogisticSearch, fit_logistic, logit_series

LOGGER = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.05
SMALL_VALUE_THRESHOLD = 0.5
SE_DEGENERATE = 1e-9
UNITY_TOLERANCE = 1e-9
SEARCH_WIDENING_FACTOR = 10.0
MAX_SEARCH_WIDENINGS = 5

MODE_REDUCED = "reduced"
MODE_EXACT = "exact"
MODES = (MODE_REDUCED, MODE_EXACT)


@dataclass(frozen=True)
class GradeRow:
    grade: int
    label: str
    coefficient: str
    evolution_type: str
    stage: str
    prediction: str


EVOLUTION_SCALE: Dict[int, GradeRow] = {
    1: GradeRow(
        grade=1,
        label="Low",
        coefficient="B < 1",
        evolution_type="Slowed evolution of technology of the whole system",
        stage="Underdevelopment",
        prediction="Technologies improve slowly over the course of time",
    ),
    2: GradeRow(
        grade=2,
        label="Average",
        coefficient="B = 1",
        evolution_type="Proportional evolution of technology",
        stage="Growth",
        prediction="Technologies have a steady-state path of evolution",
    ),
    3: GradeRow(
        grade=3,
        label="High",
        coefficient="B > 1",
        evolution_type="Accelerated evolution of technology",
        stage="Development",
        prediction="Technologies are likeliest to evolve rapidly",
    ),
}


class InteractionType(enum.Enum):
    """Typology of interaction between a host and a subsystem technology.

    Descriptive label only; nothing in the package infers it from data.
    """

    PARASITISM = ("parasitism", "+", "-")
    COMMENSALISM = ("commensalism", "+", "0")
    MUTUALISM = ("mutualism", "+", "+")
    SYMBIOSIS = ("symbiosis", "++", "++")

    def __init__(self, key: str, sub_effect: str, host_effect: str) -> None:
        self.key = key
        self.sub_effect = sub_effect
        self.host_effect = host_effect

    @property
    def symbol(self) -> str:
        return f"({self.sub_effect},{self.host_effect})"

    @classmethod
    def from_key(cls, key: str) -> "InteractionType":
        lowered = key.strip().lower()
        for member in cls:
            if member.key == lowered:
                return member
        raise ValueError(f"unknown interaction type '{key}'")


class Classification(NamedTuple):
    grade: int
    stage: str
    prediction: str


@dataclass(frozen=True)
class EvolutionResult:
    B: float
    se_B: float
    lnA: float
    fit: OlsFit
    grade: int
    stage: str
    prediction: str
    mode: str
    small_value_warning: bool
    t_unity: float
    p_unity: float
    alpha: float
    logistic_fits: Optional[Tuple[Optional[LogisticFit], Optional[LogisticFit]]] = None
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def scale_row(self) -> GradeRow:
        return EVOLUTION_SCALE[self.grade]


@dataclass(frozen=True)
class ReferenceCase:
    name: str
    sub_measure: str
    host_measure: str
    period: str
    B: float
    se_B: float
    n: int
    intercept: float
    se_intercept: float
    r2_adj: float
    resid_se: float
    f_stat: float
    expected_grade: int


REFERENCE_CASES: Tuple[ReferenceCase, ...] = (
    ReferenceCase(
        name="Farm tractor",
        sub_measure="fuel-consumption efficiency in horsepower-hours (engine)",
        host_measure="mechanical efficiency, drawbar to belt horsepower (tractor)",
        period="1920-1968",
        B=1.74,
        se_B=0.11,
        n=44,
        intercept=-5.14,
        se_intercept=0.45,
        r2_adj=0.85,
        resid_se=0.10,
        f_stat=256.44,
        expected_grade=3,
    ),
    ReferenceCase(
        name="Freight locomotive",
        sub_measure="tractive effort in pounds (locomotive)",
        host_measure="total railroad mileage (infrastructure)",
        period="1904-1932",
        B=1.89,
        se_B=0.12,
        n=29,
        intercept=-13.87,
        se_intercept=1.48,
        r2_adj=0.91,
        resid_se=0.07,
        f_stat=270.15,
        expected_grade=3,
    ),
    ReferenceCase(
        name="Steam-powered electricity generation",
        sub_measure="kWh per pound of coal (turbine and equipment)",
        host_measure="average scale of steam-powered plants",
        period="1920-1970",
        B=0.23,
        se_B=0.01,
        n=51,
        intercept=-1.35,
        se_intercept=0.04,
        r2_adj=0.93,
        resid_se=0.09,
        f_stat=675.12,
        expected_grade=1,
    ),
    ReferenceCase(
        name="Internal-combustion electricity generation",
        sub_measure="kWh per cubic foot of gas (turbine and equipment)",
        host_measure="average scale of internal-combustion plants",
        period="1920-1970",
        B=0.35,
        se_B=0.02,
        n=51,
        intercept=-2.93,
        se_intercept=0.02,
        r2_adj=0.81,
        resid_se=0.14,
        f_stat=213.63,
        expected_grade=1,
    ),
)


def unity_test(B: float, se_B: float, n: int) -> Tuple[float, float]:
    """t statistic and two-sided p-value for H0: B = 1 on n - 2 degrees of freedom."""
    if not se_B > 0:
        if abs(B - 1.0) <= UNITY_TOLERANCE:
            return 0.0, 1.0
        return math.copysign(math.inf, B - 1.0), 0.0
    t = (B - 1.0) / se_B
    return t, t_sf_two_sided(t, n - 2)


def _grade(B: float, se_B: float, n: int, alpha: float) -> int:
    t, p = unity_test(B, se_B, n)
    if se_B <= SE_DEGENERATE or not math.isfinite(t):
        # exact fit: classify the point estimate
        if abs(B - 1.0) <= UNITY_TOLERANCE:
            return 2
        return 3 if B > 1.0 else 1
    if p < alpha:
        return 3 if B > 1.0 else 1
    return 2


def classify_grade(B: float, se_B: float, n: int, alpha: float = DEFAULT_ALPHA) -> Classification:
    if n < 4:
        raise ValueError(f"classification needs n >= 4 (got {n})")
    row = EVOLUTION_SCALE[_grade(B, se_B, n, alpha)]
    return Classification(grade=row.grade, stage=row.stage, prediction=row.prediction)


def classify_reference_cases(alpha: float = DEFAULT_ALPHA) -> List[Tuple[ReferenceCase, Classification]]:
    return [(case, classify_grade(case.B, case.se_B, case.n, alpha)) for case in REFERENCE_CASES]


def _diagnostic_fit(series: TimeSeries, search: Optional[LogisticSearch], warnings: List[str]) -> Optional[LogisticFit]:
    try:
        fit = fit_logistic(series, search)
    except FitError as exc:
        message = f"logistic fit for '{series.name}' failed: {exc}"
        LOGGER.warning(message)
        warnings.append(message)
        return None
    warnings.extend(fit.warnings)
    return fit


def _small_value_check(
    pair: PairedSeries,
    fits: Tuple[Optional[LogisticFit], Optional[LogisticFit]],
    threshold: float,
) -> Tuple[bool, List[str]]:
    flagged = False
    messages: List[str] = []
    for series, fit in zip((pair.host, pair.sub), fits):
        if fit is None:
            continue
        saturation = fit.saturation(series.max_value)
        if saturation > threshold:
            flagged = True
            messages.append(
                f"'{series.name}' reaches {saturation:.0%} of its fitted asymptote "
                f"(K={fit.K:.6g}); the power-law reduction assumes values small against K"
            )
    return flagged, messages


def _finish(
    *,
    B: float,
    se_B: float,
    lnA: float,
    fit: OlsFit,
    mode: str,
    alpha: float,
    fits: Tuple[Optional[LogisticFit], Optional[LogisticFit]],
    small_value_warning: bool,
    warnings: List[str],
) -> EvolutionResult:
    t_unity, p_unity = unity_test(B, se_B, fit.n)
    grade, stage, prediction = classify_grade(B, se_B, fit.n, alpha)
    LOGGER.info("B=%.6g (se %.3g) mode=%s grade=%d %s", B, se_B, mode, grade, stage)
    return EvolutionResult(
        B=B,
        se_B=se_B,
        lnA=lnA,
        fit=fit,
        grade=grade,
        stage=stage,
        prediction=prediction,
        mode=mode,
        small_value_warning=small_value_warning,
        t_unity=t_unity,
        p_unity=p_unity,
        alpha=alpha,
        logistic_fits=fits,
        warnings=tuple(dict.fromkeys(warnings)),
    )


def estimate_evolution(
    pair: PairedSeries,
    alpha: float = DEFAULT_ALPHA,
    *,
    logistic_fits: Optional[Tuple[Optional[LogisticFit], Optional[LogisticFit]]] = None,
    small_value_threshold: float = SMALL_VALUE_THRESHOLD,
    search: Optional[LogisticSearch] = None,
) -> EvolutionResult:
    """Regress ln P on ln H; B is the slope, ln A the intercept."""
    ln_host = log_transform(pair.host)
    ln_sub = log_transform(pair.sub)
    fit = ols(ln_host.values, ln_sub.values)

    warnings: List[str] = []
    if logistic_fits is None:
        logistic_fits = (
            _diagnostic_fit(pair.host, search, warnings),
            _diagnostic_fit(pair.sub, search, warnings),
        )
    flagged, messages = _small_value_check(pair, logistic_fits, small_value_threshold)
    for message in messages:
        LOGGER.warning(message)
    warnings.extend(messages)

    return _finish(
        B=fit.slope,
        se_B=fit.se_slope,
        lnA=fit.intercept,
        fit=fit,
        mode=MODE_REDUCED,
        alpha=alpha,
        fits=logistic_fits,
        small_value_warning=flagged,
        warnings=warnings,
    )


def _at_search_bound(series: TimeSeries, fit: LogisticFit, search: LogisticSearch) -> bool:
    upper = series.max_value * search.upper_factor
    return fit.K >= upper * (1.0 - 1e-6)


def _fit_within_bound(series: TimeSeries, search: LogisticSearch) -> LogisticFit:
    """Fit a logistic, widening the asymptote search while K sits on its upper bound."""
    fit = fit_logistic(series, search)
    widenings = 0
    while _at_search_bound(series, fit, search):
        if widenings == MAX_SEARCH_WIDENINGS:
            raise SearchFailure(
                f"{series.name}: asymptote still at the search bound after widening to "
                f"{search.upper_factor:g} x max; the series shows no curvature"
            )
        search = replace(search, upper_factor=search.upper_factor * SEARCH_WIDENING_FACTOR)
        widenings += 1
        LOGGER.info("%s: K at search bound; widening to %g x max", series.name, search.upper_factor)
        fit = fit_logistic(series, search)
    return fit


def estimate_evolution_exact(
    pair: PairedSeries,
    alpha: float = DEFAULT_ALPHA,
    *,
    logistic_fits: Optional[Tuple[LogisticFit, LogisticFit]] = None,
    small_value_threshold: float = SMALL_VALUE_THRESHOLD,
    search: Optional[LogisticSearch] = None,
) -> EvolutionResult:
    """Exact logit relation: regress ln(H/(K1-H)) on ln(P/(K2-P)) and invert the slope.

    The stored ``fit`` is that H-on-P regression; B, its standard error
    (delta method) and ln A are mapped to the P-on-H orientation.
    """
    if search is None:
        search = LogisticSearch()
    warnings: List[str] = []
    if logistic_fits is None:
        host_fit = _fit_within_bound(pair.host, search)
        sub_fit = _fit_within_bound(pair.sub, search)
    else:
        host_fit, sub_fit = logistic_fits
    warnings.extend(host_fit.warnings)
    warnings.extend(sub_fit.warnings)

    host_logit = -np.array([z for _, z in logit_series(pair.host, host_fit.K)])
    sub_logit = -np.array([z for _, z in logit_series(pair.sub, sub_fit.K)])
    fit = ols(sub_logit, host_logit)
    if fit.slope == 0.0:
        raise FitError("exact-mode regression has zero slope; B is not identified")

    B = 1.0 / fit.slope
    se_B = fit.se_slope / (fit.slope * fit.slope)
    lnA = -fit.intercept / fit.slope
    flagged, _ = _small_value_check(pair, (host_fit, sub_fit), small_value_threshold)

    return _finish(
        B=B,
        se_B=se_B,
        lnA=lnA,
        fit=fit,
        mode=MODE_EXACT,
        alpha=alpha,
        fits=(host_fit, sub_fit),
        small_value_warning=flagged,
        warnings=warnings,
    )


def estimate(pair: PairedSeries, mode: str = MODE_REDUCED, alpha: float = DEFAULT_ALPHA, **kwargs) -> EvolutionResult:
    if mode == MODE_REDUCED:
        return estimate_evolution(pair, alpha, **kwargs)
    if mode == MODE_EXACT:
        return estimate_evolution_exact(pair, alpha, **kwargs)
    raise ValueError(f"unknown mode '{mode}' (expected one of {', '.join(MODES)})")


__all__ = [
    "EvolutionResult",
    "InteractionType",
    "Classification",
    "GradeRow",
    "EVOLUTION_SCALE",
    "ReferenceCase",
    "REFERENCE_CASES",
    "classify_grade",
    "classify_reference_cases",
    "unity_test",
    "estimate_evolution",
    "estimate_evolution_exact",
    "estimate",
    "DEFAULT_ALPHA",
    "MODE_REDUCED",
    "MODE_EXACT",
    "MODES",
]
