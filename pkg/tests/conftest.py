from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np
import pytest
from jsonschema import Draft202012Validator

from technometrics.series import PairedSeries, TimeSeries
from technometrics.sigmoid import logistic

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def write_rows(tmp_path: Path) -> Callable[..., Path]:
    """Write ``rows`` under a header to a CSV in tmp_path and return its path."""

    def _write(
        rows: Iterable[Sequence[object]],
        name: str = "series.csv",
        header: Sequence[str] = ("year", "value"),
        newline: str = "\n",
    ) -> Path:
        path = tmp_path / name
        lines = [",".join(header)] + [",".join(str(cell) for cell in row) for row in rows]
        path.write_bytes((newline.join(lines) + newline).encode("utf-8"))
        return path

    return _write


def make_series(name: str, times: Sequence[float], values: Sequence[float]) -> TimeSeries:
    return TimeSeries(name=name, points=tuple(zip(times, values)))


def logistic_series(name: str, times: Sequence[float], K: float, a: float, b: float) -> TimeSeries:
    return make_series(name, list(times), logistic(times, K, a, b).tolist())


def logistic_pair(
    times: Sequence[float],
    host: Tuple[float, float, float],
    sub: Tuple[float, float, float],
) -> PairedSeries:
    return PairedSeries(
        host=logistic_series("host", times, *host),
        sub=logistic_series("sub", times, *sub),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(12345))


SCHEMA_PATH = Path(__file__).resolve().parent.parent / "docs" / "report_schema.json"


@pytest.fixture
def report_schema() -> dict:
    schema = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    Draft202012Validator.check_schema(schema)
    return schema
