"""Report assembly plus JSON, Markdown and plot-data rendering.

JSON is canonical: keys sorted, floats written with 17 significant digits,
non-finite numbers as ``null``.  Markdown is rendered from the JSON payload
only, so both formats always show the same numbers.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .coevo import CoevolutionIndex, coevolution_balance
from .descstats import DescriptiveSummary
from .evolution import EVOLUTION_SCALE, MODE_EXACT, EvolutionResult, InteractionType
from .regress import OlsFit, significance_stars
from .series import PairedSeries
from .sigmoid import LogisticFit, logistic

LOGGER = logging.getLogger(__name__)

PLOT_COLUMNS = ["time", "lnH", "lnP", "fitted_lnP"]


@dataclass(frozen=True)
class SeriesInput:
    path: str
    time_col: str
    value_col: str


@dataclass(frozen=True)
class Report:
    inputs: Tuple[SeriesInput, SeriesInput]
    descriptives: Tuple[DescriptiveSummary, DescriptiveSummary]
    logistic_fits: Tuple[Optional[LogisticFit], Optional[LogisticFit]]
    evolution: EvolutionResult
    coevolution: Optional[CoevolutionIndex] = None
    interaction: Optional[InteractionType] = None
    warnings: Tuple[str, ...] = field(default_factory=tuple)
    tool_version: str = ""


def collect_warnings(*groups: Sequence[str]) -> Tuple[str, ...]:
    """Merge warning lists keeping first-seen order; every message appears once."""
    merged: Dict[str, None] = {}
    for group in groups:
        for message in group:
            merged.setdefault(message, None)
    return tuple(merged)


def build_report(
    inputs: Tuple[SeriesInput, SeriesInput],
    descriptives: Tuple[DescriptiveSummary, DescriptiveSummary],
    evolution: EvolutionResult,
    coevolution: Optional[CoevolutionIndex] = None,
    interaction: Optional[InteractionType] = None,
    extra_warnings: Sequence[str] = (),
) -> Report:
    from . import __version__

    fits = evolution.logistic_fits or (None, None)
    coevo_warnings = coevolution.warnings if coevolution else ()
    return Report(
        inputs=inputs,
        descriptives=descriptives,
        logistic_fits=fits,
        evolution=evolution,
        coevolution=coevolution,
        interaction=interaction,
        warnings=collect_warnings(evolution.warnings, coevo_warnings, extra_warnings),
        tool_version=__version__,
    )


# ---------------------------------------------------------------------------
# Dictionary form


def _summary_dict(summary: DescriptiveSummary) -> Dict[str, Any]:
    return {
        "name": summary.name,
        "n": summary.n,
        "mean": summary.mean,
        "sd": summary.sd,
        "skewness": summary.skewness,
        "kurtosis": summary.kurtosis,
    }


def _logistic_dict(fit: Optional[LogisticFit]) -> Optional[Dict[str, Any]]:
    if fit is None:
        return None
    return {
        "K": fit.K,
        "a": fit.a,
        "b": fit.b,
        "sse": fit.sse,
        "inflection_time": fit.inflection_time,
        "converged": fit.converged,
        "n": fit.n,
    }


def _ols_dict(fit: OlsFit) -> Dict[str, Any]:
    return {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "se_slope": fit.se_slope,
        "se_intercept": fit.se_intercept,
        "t_slope": fit.t_slope,
        "p_slope": fit.p_slope,
        "t_intercept": fit.t_intercept,
        "p_intercept": fit.p_intercept,
        "r2": fit.r2,
        "r2_adj": fit.r2_adj,
        "f_stat": fit.f_stat,
        "p_f": fit.p_f,
        "resid_se": fit.resid_se,
        "n": fit.n,
        "residuals": list(fit.residuals),
    }


def _evolution_dict(result: EvolutionResult) -> Dict[str, Any]:
    row = result.scale_row
    return {
        "B": result.B,
        "se_B": result.se_B,
        "lnA": result.lnA,
        "grade": result.grade,
        "grade_label": row.label,
        "stage": result.stage,
        "evolution_type": row.evolution_type,
        "prediction": result.prediction,
        "mode": result.mode,
        "alpha": result.alpha,
        "t_unity": result.t_unity,
        "p_unity": result.p_unity,
        "small_value_warning": result.small_value_warning,
        "regression": _ols_dict(result.fit),
    }


def _coevolution_dict(index: Optional[CoevolutionIndex]) -> Optional[Dict[str, Any]]:
    if index is None:
        return None
    payload: Dict[str, Any] = {
        "components": [
            {
                "name": item.tech_name,
                "generations": item.generations,
                "duration": item.duration,
                "ev": item.ev,
            }
            for item in index.components
        ],
        "cv": index.cv,
        "threshold": index.threshold,
        "coevolving": index.coevolving,
        "balance": None,
    }
    if len(index.components) == 2:
        payload["balance"] = coevolution_balance(index.components[0], index.components[1])
    return payload


def _interaction_dict(kind: Optional[InteractionType]) -> Optional[Dict[str, Any]]:
    if kind is None:
        return None
    return {"kind": kind.key, "symbol": kind.symbol}


def report_to_dict(report: Report) -> Dict[str, Any]:
    host_input, sub_input = report.inputs
    host_summary, sub_summary = report.descriptives
    host_fit, sub_fit = report.logistic_fits
    return {
        "tool_version": report.tool_version,
        "inputs": {
            "host": {"path": host_input.path, "time_col": host_input.time_col, "value_col": host_input.value_col},
            "sub": {"path": sub_input.path, "time_col": sub_input.time_col, "value_col": sub_input.value_col},
        },
        "descriptives": {"host": _summary_dict(host_summary), "sub": _summary_dict(sub_summary)},
        "logistic_fits": {"host": _logistic_dict(host_fit), "sub": _logistic_dict(sub_fit)},
        "evolution": _evolution_dict(report.evolution),
        "coevolution": _coevolution_dict(report.coevolution),
        "interaction": _interaction_dict(report.interaction),
        "warnings": list(report.warnings),
    }


# ---------------------------------------------------------------------------
# Canonical JSON


def _encode(value: Any, out: List[str]) -> None:
    if value is None:
        out.append("null")
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        number = float(value)
        out.append(format(number, ".17g") if math.isfinite(number) else "null")
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, dict):
        out.append("{")
        for position, key in enumerate(sorted(value)):
            if position:
                out.append(",")
            out.append(json.dumps(str(key), ensure_ascii=False))
            out.append(":")
            _encode(value[key], out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for position, item in enumerate(value):
            if position:
                out.append(",")
            _encode(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot encode {type(value).__name__} in a report")


def canonical_json(payload: Any) -> str:
    out: List[str] = []
    _encode(payload, out)
    return "".join(out) + "\n"


# ---------------------------------------------------------------------------
# Markdown


def _fmt(value: Optional[float], digits: int = 2) -> str:
    if value is None:
        return "n/a"
    return f"{value:.{digits}f}"


def _with_stars(estimate: Optional[float], p_value: Optional[float]) -> str:
    if estimate is None:
        return "n/a"
    stars = significance_stars(p_value) if p_value is not None else ""
    return f"{_fmt(estimate)}{stars}"


def render_markdown(payload: Dict[str, Any]) -> str:
    lines: List[str] = []
    evolution = payload["evolution"]
    regression = evolution["regression"]
    inputs = payload["inputs"]
    lines.append("# Evolution of technology report")
    lines.append("")
    lines.append(f"- Host (H): `{inputs['host']['path']}` ({inputs['host']['time_col']}, {inputs['host']['value_col']})")
    lines.append(f"- Subsystem (P): `{inputs['sub']['path']}` ({inputs['sub']['time_col']}, {inputs['sub']['value_col']})")
    lines.append(f"- Mode: {evolution['mode']}; alpha = {evolution['alpha']}")
    if payload.get("interaction"):
        interaction = payload["interaction"]
        lines.append(f"- Interaction: {interaction['kind']} {interaction['symbol']}")
    lines.append("")

    lines.append("## Descriptive statistics (log scale)")
    lines.append("")
    host_d = payload["descriptives"]["host"]
    sub_d = payload["descriptives"]["sub"]
    lines.append(f"| | {host_d['name']} | {sub_d['name']} |")
    lines.append("|---|---|---|")
    lines.append(f"| N | {host_d['n']} | {sub_d['n']} |")
    for label, key in (("Mean", "mean"), ("Std. Deviation", "sd"), ("Skewness", "skewness"), ("Kurtosis", "kurtosis")):
        lines.append(f"| {label} | {_fmt(host_d[key])} | {_fmt(sub_d[key])} |")
    lines.append("")

    lines.append("## Estimated relationship")
    lines.append("")
    lines.append(
        "| Constant (St. Err.) | Evolutionary coefficient B (St. Err.) "
        "| R² adj. (St. Err. of the Estimate) | F (sign.) |"
    )
    lines.append("|---|---|---|---|")
    if evolution["mode"] == MODE_EXACT:
        constant = f"{_fmt(evolution['lnA'])} (n/a)"
    else:
        constant = f"{_with_stars(regression['intercept'], regression['p_intercept'])} ({_fmt(regression['se_intercept'])})"
    coefficient = f"{_with_stars(evolution['B'], regression['p_slope'])} ({_fmt(evolution['se_B'])})"
    fit_quality = f"{_fmt(regression['r2_adj'])} ({_fmt(regression['resid_se'])})"
    f_cell = f"{_fmt(regression['f_stat'])} ({_fmt(regression['p_f'])})"
    lines.append(f"| {constant} | {coefficient} | {fit_quality} | {f_cell} |")
    lines.append("")
    lines.append("*** p < 0.01, ** p < 0.05, * p < 0.10")
    lines.append("")
    lines.append(
        f"**Grade {evolution['grade']} ({evolution['grade_label']})**: {evolution['stage']}. "
        f"{evolution['evolution_type']}. {evolution['prediction']}."
    )
    lines.append(
        f"Test of B = 1: t = {_fmt(evolution['t_unity'])}, p = {_fmt(evolution['p_unity'])}."
    )
    lines.append("")

    fits = payload["logistic_fits"]
    lines.append("## Logistic fits")
    lines.append("")
    lines.append("| Series | K | a | b | Inflection | SSE | Converged |")
    lines.append("|---|---|---|---|---|---|---|")
    for role in ("host", "sub"):
        fit = fits[role]
        if fit is None:
            lines.append(f"| {role} | n/a | n/a | n/a | n/a | n/a | no |")
            continue
        lines.append(
            f"| {role} | {_fmt(fit['K'])} | {_fmt(fit['a'])} | {_fmt(fit['b'])} "
            f"| {_fmt(fit['inflection_time'])} | {_fmt(fit['sse'])} | {'yes' if fit['converged'] else 'no'} |"
        )
    lines.append("")

    coevolution = payload.get("coevolution")
    if coevolution:
        lines.extend(render_coevolution_lines(coevolution))
        lines.append("")

    if payload["warnings"]:
        lines.append("## Warnings")
        lines.append("")
        lines.extend(f"- {message}" for message in payload["warnings"])
        lines.append("")
    lines.append(f"_technometrics {payload['tool_version']}_")
    return "\n".join(lines) + "\n"


def render_coevolution_lines(coevolution: Dict[str, Any]) -> List[str]:
    lines = ["## Coevolution", "", "| Technology | Generations | Years | Ev |", "|---|---|---|---|"]
    for item in coevolution["components"]:
        lines.append(f"| {item['name']} | {item['generations']} | {item['duration']:g} | {_fmt(item['ev'])} |")
    status = "coevolution" if coevolution["coevolving"] else "no coevolution"
    lines.append("")
    lines.append(f"CV = {_fmt(coevolution['cv'])} ({status}, threshold {coevolution['threshold']:g})")
    if coevolution.get("balance") is not None:
        lines.append(f"Ev ratio sub/host = {_fmt(coevolution['balance'])} (1.00 = perfect coevolution)")
    lines.append("")
    lines.append(
        f"Note: CV is the product of exact Ev ratios ({coevolution['cv']:.6g}); "
        "multiplying the rounded Ev values shown above can differ in the last digit."
    )
    return lines


# ---------------------------------------------------------------------------
# Plot data


def plot_frame(pair: PairedSeries, result: EvolutionResult) -> pd.DataFrame:
    """Columns time, lnH, lnP, fitted_lnP for external plotting."""
    times = np.array(pair.times, dtype=float)
    ln_h = np.log(pair.host.values)
    ln_p = np.log(pair.sub.values)
    if result.mode == MODE_EXACT and result.logistic_fits and all(result.logistic_fits):
        host_fit, sub_fit = result.logistic_fits
        host_logit = np.log(pair.host.values / (host_fit.K - pair.host.values))
        sub_logit_hat = result.lnA + result.B * host_logit
        fitted = np.log(logistic(sub_logit_hat, sub_fit.K, 0.0, 1.0))
    else:
        fitted = result.lnA + result.B * ln_h
    return pd.DataFrame(
        {
            "time": [format(t, ".17g") for t in times],
            "lnH": [format(v, ".17g") for v in ln_h],
            "lnP": [format(v, ".17g") for v in ln_p],
            "fitted_lnP": [format(v, ".17g") for v in fitted],
        },
        columns=PLOT_COLUMNS,
    )


def write_plot_data(pair: PairedSeries, result: EvolutionResult, target: Union[str, Path, IO[str]]) -> None:
    frame = plot_frame(pair, result)
    if isinstance(target, (str, Path)):
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    else:
        frame.to_csv(target, index=False, lineterminator="\n")
    LOGGER.debug("Plot data with %d rows written", len(frame))


__all__ = [
    "Report",
    "SeriesInput",
    "build_report",
    "collect_warnings",
    "report_to_dict",
    "canonical_json",
    "render_markdown",
    "render_coevolution_lines",
    "plot_frame",
    "write_plot_data",
    "PLOT_COLUMNS",
]
