"""Command line entry-point: analyze, coevolve, simulate, classify, describe.

Exit codes: 0 success, 2 data/config/usage error, 3 fit failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from .coevo import COEVOLUTION_THRESHOLD, coevolution_index, parse_tech_spec
from .descstats import summarize, summarize_pair
from .errors import DataError, FitError, TechnometricsError
from .evolution import (
    DEFAULT_ALPHA,
    EVOLUTION_SCALE,
    MODE_REDUCED,
    MODES,
    InteractionType,
    classify_grade,
    classify_reference_cases,
    estimate,
)
from .report import (
    SeriesInput,
    build_report,
    canonical_json,
    render_coevolution_lines,
    render_markdown,
    report_to_dict,
    write_plot_data,
)
from .series import DEFAULT_TIME_COLUMN, DEFAULT_VALUE_COLUMN, align, log_transform, parse_csv
from .synth import load_synth_config, recovery_sweep, write_sweep_csv

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DATA_ERROR = 2
EXIT_FIT_ERROR = 3


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Verbosity of diagnostics on stderr (default: WARNING).",
    )
    parser.add_argument(
        "--log-dir",
        help="Optional root directory for warning logs; logs are written under <log-dir>/analysis_log.",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Measure the evolution of technology from host/subsystem performance series"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    analyze = subparsers.add_parser("analyze", help="Estimate the evolutionary coefficient B for a host/sub pair")
    analyze.add_argument("--host", required=True, help="CSV file with the host technology series (H)")
    analyze.add_argument("--sub", required=True, help="CSV file with the subsystem technology series (P)")
    analyze.add_argument("--host-time-col", default=DEFAULT_TIME_COLUMN, help="Time column of the host CSV (default: year)")
    analyze.add_argument("--host-value-col", default=DEFAULT_VALUE_COLUMN, help="Value column of the host CSV (default: value)")
    analyze.add_argument("--sub-time-col", default=DEFAULT_TIME_COLUMN, help="Time column of the sub CSV (default: year)")
    analyze.add_argument("--sub-value-col", default=DEFAULT_VALUE_COLUMN, help="Value column of the sub CSV (default: value)")
    analyze.add_argument("--mode", choices=list(MODES), default=MODE_REDUCED, help="reduced (log-log) or exact (logit-logit)")
    analyze.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="Significance level of the B = 1 test (default: 0.05)")
    analyze.add_argument("--out", help="Report destination (default: stdout)")
    analyze.add_argument("--format", choices=["json", "md"], default="json", help="Report format (default: json)")
    analyze.add_argument("--plotdata", help="Optional CSV with time, lnH, lnP, fitted_lnP columns")
    analyze.add_argument(
        "--interaction",
        choices=[kind.key for kind in InteractionType],
        help="Label the pair with an interaction type (descriptive only)",
    )
    analyze.add_argument(
        "--coevolution",
        action="append",
        default=[],
        metavar="NAME:GENERATIONS:YEARS",
        help="Technology for an embedded coevolution index (repeat, at least twice)",
    )
    _add_common_options(analyze)

    coevolve = subparsers.add_parser("coevolve", help="Compute Ev indices and the coevolution index CV")
    coevolve.add_argument(
        "--tech",
        action="append",
        default=[],
        metavar="NAME:GENERATIONS:YEARS",
        help="Technology; repeat at least twice, host first",
    )
    coevolve.add_argument("--threshold", type=float, default=COEVOLUTION_THRESHOLD, help="CV above which technologies coevolve (default: 0.1)")
    coevolve.add_argument("--format", choices=["text", "json"], default="text", help="Output format (default: text)")
    _add_common_options(coevolve)

    simulate = subparsers.add_parser("simulate", help="Run a synthetic recovery sweep")
    simulate.add_argument("--config", required=True, help="YAML or key=value file describing the synthetic configs")
    simulate.add_argument("--replicates", type=int, help="Replicates per config (overrides the config file)")
    simulate.add_argument("--mode", choices=list(MODES), help="Estimator mode (overrides the config file)")
    simulate.add_argument("--workers", type=int, default=1, help="Threads used for replicates (default: 1)")
    simulate.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="Significance level (default: 0.05)")
    simulate.add_argument("--out", help="CSV destination (default: stdout)")
    _add_common_options(simulate)

    classify = subparsers.add_parser("classify", help="Grade a coefficient on the three-grade evolution scale")
    classify.add_argument("--B", dest="coefficient", type=float, help="Estimated coefficient B")
    classify.add_argument("--se", type=float, help="Standard error of B")
    classify.add_argument("--n", type=int, help="Number of observations")
    classify.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="Significance level (default: 0.05)")
    classify.add_argument("--reference", action="store_true", help="Grade the bundled reference regressions")
    _add_common_options(classify)

    describe = subparsers.add_parser("describe", help="Descriptive statistics of one CSV series")
    describe.add_argument("--csv", required=True, help="CSV file")
    describe.add_argument("--time-col", default=DEFAULT_TIME_COLUMN)
    describe.add_argument("--value-col", default=DEFAULT_VALUE_COLUMN)
    describe.add_argument("--linear", action="store_true", help="Summarize raw values instead of logarithms")
    _add_common_options(describe)
    return parser


def _setup_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING), format="%(levelname)s: %(message)s")
    logging.getLogger("technometrics").setLevel(getattr(logging, level.upper(), logging.WARNING))


def _resolve_log_directory(log_root: Optional[str]) -> Path:
    base = Path(log_root).expanduser().resolve() if log_root else Path.cwd()
    target_dir = base / "analysis_log"
    target_dir.mkdir(parents=True, exist_ok=True)
    return target_dir


def _write_warning_log(warnings: Sequence[str], log_root: Optional[str]) -> None:
    if not warnings or not log_root:
        return
    directory = _resolve_log_directory(log_root)
    timestamp = datetime.now().strftime("%Y%m%d-%H%M%S")
    log_path = directory / f"warnings_{timestamp}.log"
    with log_path.open("w", encoding="utf-8") as handle:
        handle.write(f"Warnings collected at {datetime.now().isoformat()}\n\n")
        for message in warnings:
            handle.write(f"{message}\n")
    LOGGER.info("Warning log written to %s", log_path)


def _emit(text: str, destination: Optional[str]) -> None:
    if destination:
        path = Path(destination)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        LOGGER.info("Output written to %s", path)
    else:
        sys.stdout.write(text)


def run_analyze(args: argparse.Namespace) -> int:
    host = parse_csv(args.host, args.host_time_col, args.host_value_col, name=Path(args.host).stem)
    sub = parse_csv(args.sub, args.sub_time_col, args.sub_value_col, name=Path(args.sub).stem)
    pair = align(host, sub)
    descriptives = summarize_pair(pair)
    result = estimate(pair, args.mode, args.alpha)

    coevolution = None
    if args.coevolution:
        coevolution = coevolution_index([parse_tech_spec(spec) for spec in args.coevolution])
    interaction = InteractionType.from_key(args.interaction) if args.interaction else None

    report = build_report(
        inputs=(
            SeriesInput(args.host, args.host_time_col, args.host_value_col),
            SeriesInput(args.sub, args.sub_time_col, args.sub_value_col),
        ),
        descriptives=descriptives,
        evolution=result,
        coevolution=coevolution,
        interaction=interaction,
    )
    document = canonical_json(report_to_dict(report))
    if args.format == "md":
        document = render_markdown(json.loads(document))

    _write_warning_log(report.warnings, args.log_dir)
    if args.plotdata:
        write_plot_data(pair, result, args.plotdata)
    _emit(document, args.out)
    return EXIT_OK


def run_coevolve(args: argparse.Namespace) -> int:
    components = [parse_tech_spec(spec) for spec in args.tech]
    index = coevolution_index(components, threshold=args.threshold)
    if args.format == "json":
        payload = {
            "components": [
                {"name": item.tech_name, "generations": item.generations, "duration": item.duration, "ev": item.ev}
                for item in index.components
            ],
            "cv": index.cv,
            "threshold": index.threshold,
            "coevolving": index.coevolving,
            "warnings": list(index.warnings),
        }
        text = canonical_json(payload)
    else:
        lines: List[str] = []
        for item in index.components:
            lines.append(f"Ev {item.tech_name} = {item.generations}/{item.duration:g} = {item.ev:.2f}")
        status = "coevolution" if index.coevolving else "no coevolution"
        lines.append(f"CV = {index.cv:.2f} ({status}; exact {index.cv:.12g})")
        text = "\n".join(lines) + "\n"
    _write_warning_log(index.warnings, args.log_dir)
    sys.stdout.write(text)
    return EXIT_OK


def run_simulate(args: argparse.Namespace) -> int:
    plan = load_synth_config(args.config)
    replicates = args.replicates if args.replicates is not None else plan.replicates
    mode = args.mode or plan.mode
    rows = recovery_sweep(plan.configs, replicates, mode=mode, alpha=args.alpha, workers=max(1, args.workers))
    if args.out:
        write_sweep_csv(rows, args.out)
        LOGGER.info("Sweep of %d rows written to %s", len(rows), args.out)
    else:
        write_sweep_csv(rows, sys.stdout)
    return EXIT_OK


def run_classify(args: argparse.Namespace) -> int:
    lines: List[str] = []
    if args.reference:
        for case, decision in classify_reference_cases(args.alpha):
            row = EVOLUTION_SCALE[decision.grade]
            lines.append(
                f"{case.name} ({case.period}): B = {case.B:.2f} ({case.se_B:.2f}), n = {case.n} -> "
                f"grade {decision.grade} {row.label}, {decision.stage}"
            )
    else:
        missing = [flag for flag, value in (("--B", args.coefficient), ("--se", args.se), ("--n", args.n)) if value is None]
        if missing:
            raise DataError(f"classify needs {', '.join(missing)} (or --reference)")
        decision = classify_grade(args.coefficient, args.se, args.n, args.alpha)
        row = EVOLUTION_SCALE[decision.grade]
        lines.append(f"Grade {decision.grade} ({row.label}): {decision.stage}")
        lines.append(f"{row.evolution_type}. {decision.prediction}.")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def run_describe(args: argparse.Namespace) -> int:
    series = parse_csv(args.csv, args.time_col, args.value_col, name=Path(args.csv).stem)
    summary = summarize(series if args.linear else log_transform(series))
    lines = [
        f"| | {summary.name} |",
        "|---|---|",
        f"| N | {summary.n} |",
        f"| Mean | {summary.mean:.2f} |",
        f"| Std. Deviation | {summary.sd:.2f} |",
        f"| Skewness | {summary.skewness:.2f} |",
        f"| Kurtosis | {summary.kurtosis:.2f} |",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "analyze": run_analyze,
    "coevolve": run_coevolve,
    "simulate": run_simulate,
    "classify": run_classify,
    "describe": run_describe,
}


def run_cli(args: argparse.Namespace) -> int:
    handler = COMMANDS[args.command]
    try:
        return handler(args)
    except FitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIT_ERROR
    except (TechnometricsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.log_level)
    return run_cli(args)


def main_with(command: str) -> Callable[[Optional[List[str]]], int]:
    """Entry point bound to one subcommand, used by the root-level scripts."""

    def _main(argv: Optional[List[str]] = None) -> int:
        rest = list(sys.argv[1:] if argv is None else argv)
        return main([command, *rest])

    return _main


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
