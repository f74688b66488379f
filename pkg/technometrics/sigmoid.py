"""Three-parameter logistic growth curves ``K / (1 + exp(a - b t))``.

The fit profiles out (a, b): for a candidate asymptote K the logit
``ln((K - v) / v)`` is linear in t, so (a, -b) come from ordinary least
squares, and K is chosen to minimize the squared error in value space.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import ConstantRegressor, InsufficientData, KTooSmall, SearchFailure
from .regress import ols
from .series import TimeSeries

LOGGER = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQUARE = (3.0 - math.sqrt(5.0)) / 2.0
MIN_LOGISTIC_POINTS = 4
REFERENCE_K_FACTOR = 2.0


@dataclass(frozen=True)
class LogisticSearch:
    lower_factor: float = 1.0 + 1e-6
    upper_factor: float = 10.0
    grid_points: int = 64
    max_iter: int = 200
    rel_tol: float = 1e-8


@dataclass(frozen=True)
class LogisticFit:
    K: float
    a: float
    b: float
    sse: float
    inflection_time: float
    converged: bool
    n: int
    iterations: int = 0
    warnings: Tuple[str, ...] = ()

    def predict(self, t: Sequence[float] | np.ndarray) -> np.ndarray:
        return logistic(t, self.K, self.a, self.b)

    def value_at_inflection(self) -> float:
        return float(logistic([self.inflection_time], self.K, self.a, self.b)[0])

    def saturation(self, value: float) -> float:
        return value / self.K


def logistic(t: Sequence[float] | np.ndarray, K: float, a: float, b: float) -> np.ndarray:
    ts = np.asarray(t, dtype=float)
    with np.errstate(over="ignore"):
        return K / (1.0 + np.exp(a - b * ts))


def _logits(values: np.ndarray, K: float) -> np.ndarray:
    return np.log((K - values) / values)


def logit_series(series: TimeSeries, K: float) -> List[Tuple[float, float]]:
    """Map every value v to ``ln((K - v) / v)``."""
    if not K > series.max_value:
        raise KTooSmall(K, series.max_value)
    logits = _logits(series.values, K)
    return [(t, float(z)) for (t, _), z in zip(series.points, logits)]


def _profile(times: np.ndarray, values: np.ndarray, K: float) -> Tuple[float, float, float]:
    """Return (sse, a, b) for a fixed K; sse is inf when K is not admissible."""
    if not K > float(np.max(values)):
        return math.inf, math.nan, math.nan
    try:
        fit = ols(times, _logits(values, K))
    except ConstantRegressor:
        return math.inf, math.nan, math.nan
    a = fit.intercept
    b = -fit.slope
    model = logistic(times, K, a, b)
    if not np.all(np.isfinite(model)) or np.any(model <= 0) or np.any(model >= K):
        return math.inf, a, b
    sse = float(np.sum((values - model) ** 2))
    return (sse if math.isfinite(sse) else math.inf), a, b


def _scan_grid(lower: float, upper: float, points: int, reference: float) -> np.ndarray:
    grid = np.geomspace(lower, upper, num=max(points, 3))
    if lower < reference < upper:
        grid = np.unique(np.append(grid, reference))
    return grid


def fit_logistic(series: TimeSeries, search: LogisticSearch | None = None) -> LogisticFit:
    if search is None:
        search = LogisticSearch()
    if len(series) < MIN_LOGISTIC_POINTS:
        raise InsufficientData(
            f"{series.name}: logistic fit needs at least {MIN_LOGISTIC_POINTS} points (got {len(series)})"
        )
    times = series.times
    values = series.values
    v_max = float(np.max(values))
    lower = v_max * search.lower_factor
    upper = v_max * search.upper_factor

    grid = _scan_grid(lower, upper, search.grid_points, REFERENCE_K_FACTOR * v_max)
    scores = np.array([_profile(times, values, K)[0] for K in grid])
    if not np.any(np.isfinite(scores)):
        raise SearchFailure(f"{series.name}: no admissible asymptote in ({lower:g}, {upper:g}]")
    best = int(np.argmin(scores))
    lo = float(grid[max(best - 1, 0)])
    hi = float(grid[min(best + 1, grid.size - 1)])

    def objective(K: float) -> float:
        return _profile(times, values, K)[0]

    # golden-section refinement inside the bracket found by the scan
    c = lo + INV_PHI_SQUARE * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    yc = objective(c)
    yd = objective(d)
    iterations = 0
    converged = False
    while iterations < search.max_iter:
        if hi - lo <= search.rel_tol * 0.5 * (hi + lo):
            converged = True
            break
        iterations += 1
        if yc < yd:
            hi, d, yd = d, c, yc
            c = lo + INV_PHI_SQUARE * (hi - lo)
            yc = objective(c)
        else:
            lo, c, yc = c, d, yd
            d = lo + INV_PHI * (hi - lo)
            yd = objective(d)

    candidate = c if yc < yd else d
    candidate_sse = min(yc, yd)
    if candidate_sse > scores[best]:
        LOGGER.debug("%s: golden-section result worse than scan; keeping scan optimum", series.name)
        candidate, candidate_sse = float(grid[best]), float(scores[best])
    if not math.isfinite(candidate_sse):
        raise SearchFailure(f"{series.name}: logistic search found no finite error")
    warnings: Tuple[str, ...] = ()
    if not converged:
        message = (
            f"{series.name}: logistic search stopped after {iterations} iterations "
            f"without reaching tolerance {search.rel_tol:g}"
        )
        LOGGER.warning(message)
        warnings = (message,)

    sse, a, b = _profile(times, values, candidate)
    inflection = a / b if b != 0 else math.nan
    LOGGER.debug("%s: K=%g a=%g b=%g sse=%g (%d iterations)", series.name, candidate, a, b, sse, iterations)
    return LogisticFit(
        K=candidate,
        a=a,
        b=b,
        sse=sse,
        inflection_time=inflection,
        converged=converged,
        n=len(series),
        iterations=iterations,
        warnings=warnings,
    )


__all__ = ["LogisticFit", "LogisticSearch", "logistic", "logit_series", "fit_logistic"]
