"""Simple linear least squares with the usual inference set.

Distribution functions for p-values come from the regularized incomplete
beta function, evaluated by continued fraction (modified Lentz).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ConstantRegressor, InsufficientData, LengthMismatch

LOGGER = logging.getLogger(__name__)

MIN_REGRESSION_POINTS = 3
BETA_CF_TOLERANCE = 1e-12
BETA_CF_MAX_ITER = 200
_TINY = 1e-300

SIGNIFICANCE_LEVELS: Tuple[Tuple[float, str], ...] = ((0.01, "***"), (0.05, "**"), (0.10, "*"))


@dataclass(frozen=True)
class OlsFit:
    """Fit of ``y = intercept + slope * x + u``."""

    slope: float
    intercept: float
    se_slope: float
    se_intercept: float
    t_slope: float
    p_slope: float
    t_intercept: float
    p_intercept: float
    r2: float
    r2_adj: float
    f_stat: float
    p_f: float
    resid_se: float
    sse: float
    sst: float
    n: int
    residuals: Tuple[float, ...]

    @property
    def df_resid(self) -> int:
        return self.n - 2

    def predict(self, x: Sequence[float] | np.ndarray) -> np.ndarray:
        return self.intercept + self.slope * np.asarray(x, dtype=float)


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, BETA_CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < BETA_CF_TOLERANCE:
            return h
    LOGGER.warning(
        "Incomplete beta continued fraction did not converge (a=%g, b=%g, x=%g) in %d iterations",
        a,
        b,
        x,
        BETA_CF_MAX_ITER,
    )
    return h


def incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError(f"incomplete_beta requires a, b > 0 (got a={a}, b={b})")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def t_sf_two_sided(t: float, df: int) -> float:
    """Two-sided tail probability P(|T| >= |t|) of Student's t with ``df`` degrees of freedom."""
    if math.isnan(t):
        return math.nan
    if math.isinf(t):
        return 0.0
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def t_cdf(t: float, df: int) -> float:
    if df < 1:
        raise ValueError(f"df must be >= 1 (got {df})")
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    tail = 0.5 * t_sf_two_sided(t, df)
    return 1.0 - tail if t >= 0 else tail


def f_sf(f: float, df1: int, df2: int) -> float:
    """Upper tail P(F >= f) for the F(df1, df2) distribution."""
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    return incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f))


def f_cdf(f: float, df1: int, df2: int) -> float:
    if df1 < 1 or df2 < 1:
        raise ValueError(f"degrees of freedom must be >= 1 (got {df1}, {df2})")
    if f < 0:
        raise ValueError(f"f must be >= 0 (got {f})")
    if f == 0:
        return 0.0
    if math.isinf(f):
        return 1.0
    return incomplete_beta(df1 / 2.0, df2 / 2.0, df1 * f / (df1 * f + df2))


def significance_stars(p: float) -> str:
    for level, stars in SIGNIFICANCE_LEVELS:
        if p < level:
            return stars
    return ""


def _t_ratio(estimate: float, se: float) -> float:
    if se > 0:
        return estimate / se
    if estimate == 0:
        return 0.0
    return math.copysign(math.inf, estimate)


def ols(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> OlsFit:
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if xs.shape != ys.shape:
        raise LengthMismatch(f"x has {xs.size} values, y has {ys.size}")
    n = int(xs.size)
    if n < MIN_REGRESSION_POINTS:
        raise InsufficientData(f"regression needs at least {MIN_REGRESSION_POINTS} points (got {n})")

    x_mean = float(np.mean(xs))
    y_mean = float(np.mean(ys))
    dx = xs - x_mean
    dy = ys - y_mean
    sxx = float(np.dot(dx, dx))
    if sxx == 0.0:
        raise ConstantRegressor("regressor is constant; slope is not identified")
    sxy = float(np.dot(dx, dy))
    sst = float(np.dot(dy, dy))

    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    residuals = ys - (intercept + slope * xs)
    sse = float(np.dot(residuals, residuals))
    df = n - 2

    resid_se = math.sqrt(sse / df)
    se_slope = resid_se / math.sqrt(sxx)
    se_intercept = resid_se * math.sqrt(1.0 / n + x_mean * x_mean / sxx)
    t_slope = _t_ratio(slope, se_slope)
    t_intercept = _t_ratio(intercept, se_intercept)

    if sst > 0:
        r2 = min(1.0, max(0.0, 1.0 - sse / sst))
    else:
        # constant response: the horizontal line fits exactly
        r2 = 1.0
    r2_adj = 1.0 - (1.0 - r2) * (n - 1) / df
    if sse > 0:
        f_stat = (sst - sse) / (sse / df)
    else:
        f_stat = math.inf if sst > 0 else 0.0

    return OlsFit(
        slope=slope,
        intercept=intercept,
        se_slope=se_slope,
        se_intercept=se_intercept,
        t_slope=t_slope,
        p_slope=t_sf_two_sided(t_slope, df),
        t_intercept=t_intercept,
        p_intercept=t_sf_two_sided(t_intercept, df),
        r2=r2,
        r2_adj=r2_adj,
        f_stat=f_stat,
        p_f=f_sf(f_stat, 1, df),
        resid_se=resid_se,
        sse=sse,
        sst=sst,
        n=n,
        residuals=tuple(float(r) for r in residuals),
    )


__all__ = [
    "OlsFit",
    "ols",
    "incomplete_beta",
    "t_cdf",
    "t_sf_two_sided",
    "f_cdf",
    "f_sf",
    "significance_stars",
    "MIN_REGRESSION_POINTS",
]
