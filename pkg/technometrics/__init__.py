"""Technometrics toolkit with lazy attribute access to keep imports light."""
from __future__ import annotations

from importlib import import_module
from typing import Any

__version__ = "0.4.0"

_EXPORTS = {
    "main": "technometrics.cli",
    "TimeSeries": "technometrics.series",
    "PairedSeries": "technometrics.series",
    "parse_csv": "technometrics.series",
    "write_csv": "technometrics.series",
    "align": "technometrics.series",
    "log_transform": "technometrics.series",
    "summarize": "technometrics.descstats",
    "ols": "technometrics.regress",
    "t_cdf": "technometrics.regress",
    "f_cdf": "technometrics.regress",
    "fit_logistic": "technometrics.sigmoid",
    "logit_series": "technometrics.sigmoid",
    "estimate_evolution": "technometrics.evolution",
    "estimate_evolution_exact": "technometrics.evolution",
    "classify_grade": "technometrics.evolution",
    "evolution_index": "technometrics.coevo",
    "coevolution_index": "technometrics.coevo",
    "generate_pair": "technometrics.synth",
    "recovery_sweep": "technometrics.synth",
}

__all__ = ["__version__", *_EXPORTS]


def __getattr__(name: str) -> Any:  # pragma: no cover - thin lazy loader
    module_name = _EXPORTS.get(name)
    if module_name is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    return getattr(import_module(module_name), name)
