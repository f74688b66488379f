"""Time-series containers plus CSV ingestion, alignment and log transforms."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import (
    DataError,
    DuplicateTime,
    InsufficientData,
    InsufficientOverlap,
    LengthMismatch,
    MissingColumn,
    NonNumericCell,
    NonPositiveValue,
)

LOGGER = logging.getLogger(__name__)

DEFAULT_TIME_COLUMN = "year"
DEFAULT_VALUE_COLUMN = "value"
MIN_SERIES_POINTS = 3
MIN_PAIRED_POINTS = 4
LOG_PREFIX = "LN "

Point = Tuple[float, float]


@dataclass(frozen=True)
class TimeSeries:
    """One functional measure of technology sampled over calendar time.

    ``log_scale`` marks series produced by :func:`log_transform`; those may
    hold non-positive values, every other series must be strictly positive.
    """

    name: str
    points: Tuple[Point, ...]
    units: str = ""
    log_scale: bool = False

    def __post_init__(self) -> None:
        points = tuple((float(t), float(v)) for t, v in self.points)
        object.__setattr__(self, "points", points)
        for (t0, _), (t1, _) in zip(points, points[1:]):
            if t1 == t0:
                raise DuplicateTime(t1, self.name)
            if t1 < t0:
                raise DataError(f"{self.name}: times must be strictly increasing ({t0:g} then {t1:g})")
        if not self.log_scale:
            for row, (t, v) in enumerate(points, start=1):
                if not v > 0:
                    raise NonPositiveValue(t, v, row=row, source=self.name)
        if len(points) < MIN_SERIES_POINTS:
            raise InsufficientData(
                f"{self.name}: {len(points)} points; at least {MIN_SERIES_POINTS} required"
            )

    def __len__(self) -> int:
        return len(self.points)

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.points], dtype=float)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points], dtype=float)

    @property
    def max_value(self) -> float:
        return max(v for _, v in self.points)

    def restrict(self, times: Iterable[float]) -> "TimeSeries":
        keep = set(times)
        return TimeSeries(
            name=self.name,
            points=tuple(p for p in self.points if p[0] in keep),
            units=self.units,
            log_scale=self.log_scale,
        )

    def with_values(self, values: Sequence[float], name: Optional[str] = None, log_scale: Optional[bool] = None) -> "TimeSeries":
        if len(values) != len(self.points):
            raise LengthMismatch(f"{self.name}: expected {len(self.points)} values, got {len(values)}")
        return TimeSeries(
            name=self.name if name is None else name,
            points=tuple((t, float(v)) for (t, _), v in zip(self.points, values)),
            units=self.units,
            log_scale=self.log_scale if log_scale is None else log_scale,
        )


@dataclass(frozen=True)
class PairedSeries:
    """Host series H and subsystem series P sampled on identical times."""

    host: TimeSeries
    sub: TimeSeries
    times: Tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        host_times = tuple(t for t, _ in self.host.points)
        sub_times = tuple(t for t, _ in self.sub.points)
        if host_times != sub_times:
            raise LengthMismatch(
                f"host '{self.host.name}' and sub '{self.sub.name}' are not aligned; use align()"
            )
        if len(host_times) < MIN_PAIRED_POINTS:
            raise InsufficientOverlap(len(host_times), MIN_PAIRED_POINTS)
        object.__setattr__(self, "times", host_times)

    def __len__(self) -> int:
        return len(self.times)


def _parse_number(raw: str, row: int, column: str, source: str) -> float:
    text = raw.strip()
    try:
        number = float(text)
    except ValueError:
        raise NonNumericCell(row, column, raw, source) from None
    if not math.isfinite(number):
        raise NonNumericCell(row, column, raw, source)
    return number


def parse_csv(
    path: str | Path,
    time_col: str = DEFAULT_TIME_COLUMN,
    value_col: str = DEFAULT_VALUE_COLUMN,
    name: Optional[str] = None,
    units: str = "",
) -> TimeSeries:
    """Read one series from a headed, comma-delimited UTF-8 CSV file.

    Rows are numbered from 1 (first row after the header) in error messages.
    The result is sorted by time; duplicate times are rejected.
    """
    source = str(path)
    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            encoding="utf-8-sig",
            skipinitialspace=True,
        )
    except FileNotFoundError:
        raise DataError(f"{source}: file not found") from None
    except pd.errors.EmptyDataError:
        raise InsufficientData(f"{source}: file is empty") from None
    except pd.errors.ParserError as exc:
        raise DataError(f"{source}: {exc}") from None

    frame.columns = [str(column).strip() for column in frame.columns]
    for column in (time_col, value_col):
        if column not in frame.columns:
            raise MissingColumn(column, source)

    points: list[Point] = []
    seen: dict[float, int] = {}
    for row, (raw_time, raw_value) in enumerate(zip(frame[time_col], frame[value_col]), start=1):
        time = _parse_number(raw_time, row, time_col, source)
        value = _parse_number(raw_value, row, value_col, source)
        if value <= 0:
            raise NonPositiveValue(time, value, row=row, source=source)
        if time in seen:
            raise DuplicateTime(time, source)
        seen[time] = row
        points.append((time, value))

    points.sort(key=lambda point: point[0])
    LOGGER.debug("Parsed %d rows from %s (%s, %s)", len(points), source, time_col, value_col)
    return TimeSeries(name=name or value_col, points=tuple(points), units=units)


def _format_number(value: float) -> str:
    return format(value, ".17g")


def write_csv(
    series: TimeSeries,
    path: str | Path,
    time_col: str = DEFAULT_TIME_COLUMN,
    value_col: str = DEFAULT_VALUE_COLUMN,
) -> None:
    frame = pd.DataFrame(
        {
            time_col: [_format_number(t) for t, _ in series.points],
            value_col: [_format_number(v) for _, v in series.points],
        }
    )
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, index=False, lineterminator="\n", encoding="utf-8")


def align(host: TimeSeries, sub: TimeSeries) -> PairedSeries:
    """Restrict both series to their common times; missing years are dropped."""
    common = set(t for t, _ in host.points) & set(t for t, _ in sub.points)
    if len(common) < MIN_PAIRED_POINTS:
        raise InsufficientOverlap(len(common), MIN_PAIRED_POINTS)
    dropped_host = len(host) - len(common)
    dropped_sub = len(sub) - len(common)
    if dropped_host or dropped_sub:
        LOGGER.info(
            "Alignment dropped %d host and %d sub times without a counterpart",
            dropped_host,
            dropped_sub,
        )
    return PairedSeries(host=host.restrict(common), sub=sub.restrict(common))


def load_pair(
    host_path: str | Path,
    sub_path: str | Path,
    host_columns: Tuple[str, str] = (DEFAULT_TIME_COLUMN, DEFAULT_VALUE_COLUMN),
    sub_columns: Tuple[str, str] = (DEFAULT_TIME_COLUMN, DEFAULT_VALUE_COLUMN),
) -> PairedSeries:
    host = parse_csv(host_path, *host_columns, name=Path(host_path).stem)
    sub = parse_csv(sub_path, *sub_columns, name=Path(sub_path).stem)
    return align(host, sub)


def log_transform(series: TimeSeries) -> TimeSeries:
    """Natural logarithm of every value; the name gains the ``LN`` prefix."""
    for row, (t, v) in enumerate(series.points, start=1):
        if not v > 0:
            raise NonPositiveValue(t, v, row=row, source=series.name)
    return series.with_values(
        np.log(series.values).tolist(),
        name=f"{LOG_PREFIX}{series.name}",
        log_scale=True,
    )


__all__ = [
    "TimeSeries",
    "PairedSeries",
    "parse_csv",
    "write_csv",
    "align",
    "load_pair",
    "log_transform",
    "DEFAULT_TIME_COLUMN",
    "DEFAULT_VALUE_COLUMN",
    "MIN_PAIRED_POINTS",
]
