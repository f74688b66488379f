"""Synthetic host/subsystem logistic trajectories and estimator-recovery sweeps.

Random numbers come from numpy's PCG64 generator seeded from the config, so
a (seed, rng) pair reproduces the same series everywhere.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import IO, Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .errors import ConfigError, DegenerateNoise
from .evolution import DEFAULT_ALPHA, MODE_EXACT, MODE_REDUCED, MODES, estimate
from .series import PairedSeries, TimeSeries
from .sigmoid import logistic

LOGGER = logging.getLogger(__name__)

SUPPORTED_RNGS = ("pcg64",)
MAX_RESAMPLES = 100
KEY_VALUE_SUFFIXES = {".cfg", ".txt", ".env", ".ini", ".conf"}


@dataclass(frozen=True)
class SynthConfig:
    K_host: float = 100.0
    K_sub: float = 100.0
    a_host: float = 5.0
    a_sub: float = 5.0
    b_host: float = 0.5
    b_sub: float = 0.5
    t_start: float = 0.0
    t_end: float = 20.0
    t_step: float = 1.0
    noise_sd: float = 0.0
    seed: int = 0
    rng: str = "pcg64"
    label: str = ""

    def __post_init__(self) -> None:
        problems: List[str] = []
        if not self.K_host > 0 or not self.K_sub > 0:
            problems.append("K_host and K_sub must be > 0")
        if not self.t_end > self.t_start:
            problems.append("t_end must exceed t_start")
        if not self.t_step > 0:
            problems.append("t_step must be > 0")
        if not self.noise_sd >= 0:
            problems.append("noise_sd must be >= 0")
        if self.b_host == 0:
            problems.append("b_host must be non-zero")
        if self.rng.lower() not in SUPPORTED_RNGS:
            problems.append(f"rng '{self.rng}' unsupported (expected one of {', '.join(SUPPORTED_RNGS)})")
        if problems:
            raise ConfigError(self.label or None, "; ".join(problems))

    @property
    def true_B(self) -> float:
        return self.b_sub / self.b_host

    def times(self) -> np.ndarray:
        count = int(math.floor((self.t_end - self.t_start) / self.t_step + 1e-9)) + 1
        return self.t_start + self.t_step * np.arange(count, dtype=float)


@dataclass(frozen=True)
class SweepPlan:
    configs: Tuple[SynthConfig, ...]
    replicates: int = 1
    mode: str = MODE_REDUCED
    source: Optional[str] = None


@dataclass(frozen=True)
class SweepRow:
    label: str
    true_B: float
    mode: str
    replicates: int
    median_B: float
    median_abs_error: float


SWEEP_COLUMNS = [f.name for f in fields(SweepRow)]


def _noisy(clean: np.ndarray, sd: float, rng: np.random.Generator, name: str) -> np.ndarray:
    if sd == 0:
        return clean.copy()
    values = clean + rng.normal(0.0, sd, size=clean.size)
    for idx in np.flatnonzero(values <= 0):
        for _ in range(MAX_RESAMPLES):
            values[idx] = clean[idx] + rng.normal(0.0, sd)
            if values[idx] > 0:
                break
        else:
            raise DegenerateNoise(
                f"{name}: no positive draw at index {idx} after {MAX_RESAMPLES} resamples "
                f"(mean {clean[idx]:g}, sd {sd:g})"
            )
    return values


def generate_pair(cfg: SynthConfig) -> PairedSeries:
    times = cfg.times()
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    host_clean = logistic(times, cfg.K_host, cfg.a_host, cfg.b_host)
    sub_clean = logistic(times, cfg.K_sub, cfg.a_sub, cfg.b_sub)
    host_values = _noisy(host_clean, cfg.noise_sd, rng, "host")
    sub_values = _noisy(sub_clean, cfg.noise_sd, rng, "sub")
    prefix = f"{cfg.label} " if cfg.label else ""
    host = TimeSeries(name=f"{prefix}host", points=tuple(zip(times.tolist(), host_values.tolist())))
    sub = TimeSeries(name=f"{prefix}sub", points=tuple(zip(times.tolist(), sub_values.tolist())))
    return PairedSeries(host=host, sub=sub)


def small_value_window(cfg: SynthConfig, fraction: float) -> Tuple[float, float]:
    """Time interval inside [t_start, t_end] where both clean curves stay at or below ``fraction`` of K."""
    if not 0 < fraction < 1:
        raise ValueError(f"fraction must lie in (0, 1) (got {fraction})")
    level = math.log((1.0 - fraction) / fraction)
    lo, hi = cfg.t_start, cfg.t_end
    for a, b in ((cfg.a_host, cfg.b_host), (cfg.a_sub, cfg.b_sub)):
        if b == 0:
            continue
        # v/K <= fraction  <=>  a - b t >= level
        bound = (a - level) / b
        if b > 0:
            hi = min(hi, bound)
        else:
            lo = max(lo, bound)
    return lo, hi


def _replicate_estimate(cfg: SynthConfig, mode: str, alpha: float) -> float:
    pair = generate_pair(cfg)
    if mode == MODE_REDUCED:
        result = estimate(pair, MODE_REDUCED, alpha, logistic_fits=(None, None))
    else:
        result = estimate(pair, MODE_EXACT, alpha)
    return result.B


def recovery_sweep(
    grid: Sequence[SynthConfig],
    replicates: int,
    mode: str = MODE_REDUCED,
    alpha: float = DEFAULT_ALPHA,
    workers: int = 1,
) -> List[SweepRow]:
    """Median recovered B per config; replicate r of a config uses seed ``cfg.seed + r``."""
    if replicates < 1:
        raise ConfigError(None, f"replicates must be >= 1 (got {replicates})")
    if mode not in MODES:
        raise ConfigError(None, f"unknown mode '{mode}'")
    rows: List[SweepRow] = []
    for index, cfg in enumerate(grid):
        tasks = [replace(cfg, seed=cfg.seed + r) for r in range(replicates)]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                estimates = list(pool.map(lambda task: _replicate_estimate(task, mode, alpha), tasks))
        else:
            estimates = [_replicate_estimate(task, mode, alpha) for task in tasks]
        values = np.array(estimates, dtype=float)
        row = SweepRow(
            label=cfg.label or f"config{index + 1}",
            true_B=cfg.true_B,
            mode=mode,
            replicates=replicates,
            median_B=float(np.median(values)),
            median_abs_error=float(np.median(np.abs(values - cfg.true_B))),
        )
        LOGGER.info(
            "%s: true B %.6g, median B %.6g over %d replicates",
            row.label,
            row.true_B,
            row.median_B,
            replicates,
        )
        rows.append(row)
    return rows


def sweep_frame(rows: Iterable[SweepRow]) -> pd.DataFrame:
    records = []
    for row in rows:
        records.append(
            {
                "label": row.label,
                "true_B": format(row.true_B, ".17g"),
                "mode": row.mode,
                "replicates": str(row.replicates),
                "median_B": format(row.median_B, ".17g"),
                "median_abs_error": format(row.median_abs_error, ".17g"),
            }
        )
    return pd.DataFrame.from_records(records, columns=SWEEP_COLUMNS)


def write_sweep_csv(rows: Iterable[SweepRow], target: Union[str, Path, IO[str]]) -> None:
    frame = sweep_frame(rows)
    if isinstance(target, (str, Path)):
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    else:
        frame.to_csv(target, index=False, lineterminator="\n")


# ---------------------------------------------------------------------------
# Configuration files

_FIELD_TYPES: Dict[str, type] = {
    "K_host": float,
    "K_sub": float,
    "a_host": float,
    "a_sub": float,
    "b_host": float,
    "b_sub": float,
    "t_start": float,
    "t_end": float,
    "t_step": float,
    "noise_sd": float,
    "seed": int,
    "rng": str,
    "label": str,
}
_PLAN_KEYS = {"replicates", "mode", "base", "grid", "configs"}


def _coerce_fields(raw: Mapping[str, Any], source: str) -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for key, value in raw.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(source, f"unknown field '{key}'")
        kind = _FIELD_TYPES[key]
        try:
            if kind is int:
                number = float(value)
                if not number.is_integer():
                    raise ValueError(value)
                values[key] = int(number)
            elif kind is float:
                values[key] = float(value)
            else:
                values[key] = str(value)
        except (TypeError, ValueError):
            raise ConfigError(source, f"field '{key}' expects {kind.__name__} (got {value!r})") from None
    return values


def _build_config(raw: Mapping[str, Any], source: str) -> SynthConfig:
    try:
        return SynthConfig(**_coerce_fields(raw, source))
    except ConfigError as exc:
        raise ConfigError(source, exc.detail) from None


def _read_key_value(path: Path) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    source = str(path)
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            text = line.split("#", 1)[0].strip()
            if not text or (text.startswith("[") and text.endswith("]")):
                continue
            if "=" not in text:
                raise ConfigError(source, f"line {line_no}: expected key=value")
            key, value = (part.strip() for part in text.split("=", 1))
            data[key] = value
    return data


def _read_yaml(path: Path) -> Any:
    import yaml

    source = str(path)
    try:
        with path.open("r", encoding="utf-8") as handle:
            return yaml.safe_load(handle)
    except yaml.YAMLError as exc:
        raise ConfigError(source, f"YAML parse error: {exc}") from None


def load_synth_config(path: Union[str, Path]) -> SweepPlan:
    """Load a sweep plan from YAML or a plain ``key=value`` file.

    YAML may be a flat mapping of config fields, or a mapping with ``base``
    (shared fields) and ``grid`` (list of per-config overrides) or
    ``configs`` (list of full configs); ``replicates`` and ``mode`` are optional.
    """
    target = Path(path).expanduser()
    source = str(target)
    if not target.exists():
        raise ConfigError(source, "file not found")
    try:
        if target.suffix.lower() in KEY_VALUE_SUFFIXES:
            raw = _read_key_value(target)
        else:
            raw = _read_yaml(target)
    except OSError as exc:
        raise ConfigError(source, str(exc)) from None
    if not isinstance(raw, dict):
        raise ConfigError(source, "top level must be a mapping")

    replicates_raw = raw.get("replicates", 1)
    try:
        replicates = int(replicates_raw)
    except (TypeError, ValueError):
        raise ConfigError(source, f"replicates must be an integer (got {replicates_raw!r})") from None
    if replicates < 1:
        raise ConfigError(source, "replicates must be >= 1")
    mode = str(raw.get("mode", MODE_REDUCED)).strip().lower()
    if mode not in MODES:
        raise ConfigError(source, f"mode must be one of {', '.join(MODES)} (got '{mode}')")

    configs: List[SynthConfig] = []
    if "configs" in raw:
        entries = raw["configs"]
        if not isinstance(entries, list) or not entries:
            raise ConfigError(source, "'configs' must be a non-empty list")
        for entry in entries:
            if not isinstance(entry, dict):
                raise ConfigError(source, f"config entry must be a mapping (got {entry!r})")
            configs.append(_build_config(entry, source))
    elif "grid" in raw:
        base = raw.get("base") or {}
        if not isinstance(base, dict):
            raise ConfigError(source, "'base' must be a mapping")
        overrides = raw["grid"]
        if not isinstance(overrides, list) or not overrides:
            raise ConfigError(source, "'grid' must be a non-empty list")
        for entry in overrides:
            if not isinstance(entry, dict):
                raise ConfigError(source, f"grid entry must be a mapping (got {entry!r})")
            configs.append(_build_config({**base, **entry}, source))
    else:
        flat = {key: value for key, value in raw.items() if key not in _PLAN_KEYS}
        configs.append(_build_config(flat, source))

    LOGGER.debug("Loaded %d synthetic configs from %s", len(configs), source)
    return SweepPlan(configs=tuple(configs), replicates=replicates, mode=mode, source=source)


__all__ = [
    "SynthConfig",
    "SweepPlan",
    "SweepRow",
    "generate_pair",
    "small_value_window",
    "recovery_sweep",
    "sweep_frame",
    "write_sweep_csv",
    "load_synth_config",
]
