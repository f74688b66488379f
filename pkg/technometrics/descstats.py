"""Descriptive moments with bias-adjusted skewness and excess kurtosis.

The estimators are the ones common statistics packages report (SPSS, Excel):

    skewness = n / ((n-1)(n-2)) * sum(z**3)
    kurtosis = n(n+1) / ((n-1)(n-2)(n-3)) * sum(z**4) - 3(n-1)**2 / ((n-2)(n-3))

with ``z = (x - mean) / sd`` and ``sd`` using the n-1 denominator.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple, Union

import numpy as np

from .errors import DegenerateSample, InsufficientData
from .series import PairedSeries, TimeSeries, log_transform

MIN_MOMENT_POINTS = 4


@dataclass(frozen=True)
class DescriptiveSummary:
    name: str
    n: int
    mean: float
    sd: float
    skewness: float
    kurtosis: float


def _as_array(sample: Union[TimeSeries, Iterable[float]]) -> Tuple[str, np.ndarray]:
    if isinstance(sample, TimeSeries):
        return sample.name, sample.values
    return "", np.asarray(list(sample), dtype=float)


def summarize(sample: Union[TimeSeries, Iterable[float]]) -> DescriptiveSummary:
    name, x = _as_array(sample)
    n = int(x.size)
    if n < MIN_MOMENT_POINTS:
        raise InsufficientData(f"{name or 'sample'}: {n} values; kurtosis needs at least {MIN_MOMENT_POINTS}")
    mean = float(np.mean(x))
    deviations = x - mean
    sd = float(np.sqrt(np.sum(deviations**2) / (n - 1)))
    if sd == 0.0 or np.allclose(deviations, 0.0, rtol=0.0, atol=1e-14 * max(1.0, abs(mean))):
        raise DegenerateSample(f"{name or 'sample'}: zero variance; skewness and kurtosis are undefined")
    z = deviations / sd
    skewness = n / ((n - 1) * (n - 2)) * float(np.sum(z**3))
    kurtosis = (
        n * (n + 1) / ((n - 1) * (n - 2) * (n - 3)) * float(np.sum(z**4))
        - 3.0 * (n - 1) ** 2 / ((n - 2) * (n - 3))
    )
    return DescriptiveSummary(name=name, n=n, mean=mean, sd=sd, skewness=skewness, kurtosis=kurtosis)


def summarize_pair(pair: PairedSeries) -> Tuple[DescriptiveSummary, DescriptiveSummary]:
    """Host and sub summaries on the log scale, the layout of a descriptive table."""
    return summarize(log_transform(pair.host)), summarize(log_transform(pair.sub))


__all__ = ["DescriptiveSummary", "summarize", "summarize_pair", "MIN_MOMENT_POINTS"]
