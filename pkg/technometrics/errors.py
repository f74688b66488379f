"""Exception hierarchy shared by the technometrics modules.

Library code raises; only :mod:`technometrics.cli` turns these into exit codes.
``DataError`` maps to exit code 2 and ``FitError`` to exit code 3.
"""
from __future__ import annotations

from typing import Optional


class TechnometricsError(ValueError):
    """Base class for every error raised by the package."""

    exit_code = 1


class DataError(TechnometricsError):
    exit_code = 2


class FitError(TechnometricsError):
    exit_code = 3


class MissingColumn(DataError):
    def __init__(self, column: str, source: Optional[str] = None) -> None:
        self.column = column
        self.source = source
        where = f" in {source}" if source else ""
        super().__init__(f"missing column '{column}'{where}")


class NonNumericCell(DataError):
    def __init__(self, row: int, column: str, raw: str, source: Optional[str] = None) -> None:
        self.row = row
        self.column = column
        self.raw = raw
        where = f"{source}: " if source else ""
        super().__init__(f"{where}row {row}: column '{column}' is not numeric ({raw!r})")


class NonPositiveValue(DataError):
    def __init__(
        self,
        time: float,
        value: float,
        row: Optional[int] = None,
        source: Optional[str] = None,
    ) -> None:
        self.time = time
        self.value = value
        self.row = row
        where = f"{source}: " if source else ""
        row_part = f"row {row} " if row is not None else ""
        super().__init__(f"{where}{row_part}(time {time:g}): value {value!r} must be > 0")


class DuplicateTime(DataError):
    def __init__(self, time: float, source: Optional[str] = None) -> None:
        self.time = time
        where = f"{source}: " if source else ""
        super().__init__(f"{where}duplicate time {time:g}")


class InsufficientData(DataError):
    pass


class InsufficientOverlap(DataError):
    def __init__(self, common: int, required: int) -> None:
        self.common = common
        self.required = required
        super().__init__(f"only {common} common times after alignment; at least {required} required")


class LengthMismatch(DataError):
    pass


class ConstantRegressor(DataError):
    pass


class DegenerateSample(DataError):
    pass


class InvalidCount(DataError):
    pass


class InvalidDuration(DataError):
    pass


class TooFewComponents(DataError):
    pass


class ConfigError(DataError):
    def __init__(self, source: Optional[str], detail: str) -> None:
        self.source = source
        self.detail = detail
        prefix = f"config {source}" if source else "config"
        super().__init__(f"{prefix}: {detail}")


class DegenerateNoise(DataError):
    pass


class KTooSmall(FitError):
    def __init__(self, K: float, max_value: float) -> None:
        self.K = K
        self.max_value = max_value
        super().__init__(f"asymptote K={K:g} does not exceed every value (max {max_value:g})")


class SearchFailure(FitError):
    pass


__all__ = [
    "TechnometricsError",
    "DataError",
    "FitError",
    "MissingColumn",
    "NonNumericCell",
    "NonPositiveValue",
    "DuplicateTime",
    "InsufficientData",
    "InsufficientOverlap",
    "LengthMismatch",
    "ConstantRegressor",
    "DegenerateSample",
    "InvalidCount",
    "InvalidDuration",
    "TooFewComponents",
    "ConfigError",
    "DegenerateNoise",
    "KTooSmall",
    "SearchFailure",
]
