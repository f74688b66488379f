"""Evolution (Ev) and coevolution (CV) indices for interacting technologies.

``Ev = generations / years``; the coevolution index of a system is the
product of its components' Ev values.  The first component is the host.
Exact ratios are kept; rounding only happens when values are displayed.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Tuple

from .errors import DataError, InvalidCount, InvalidDuration, TooFewComponents

LOGGER = logging.getLogger(__name__)

COEVOLUTION_THRESHOLD = 0.1


@dataclass(frozen=True)
class EvolutionIndex:
    tech_name: str
    generations: int
    duration: float
    ev: float


@dataclass(frozen=True)
class CoevolutionIndex:
    components: Tuple[EvolutionIndex, ...]
    cv: float
    threshold: float = COEVOLUTION_THRESHOLD
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def host(self) -> EvolutionIndex:
        return self.components[0]

    @property
    def coevolving(self) -> bool:
        return self.cv > self.threshold


def evolution_index(name: str, generations: int, duration: float) -> EvolutionIndex:
    if isinstance(generations, bool) or int(generations) != generations or generations < 1:
        raise InvalidCount(f"{name}: generations must be an integer >= 1 (got {generations!r})")
    if not (isinstance(duration, (int, float)) and math.isfinite(duration) and duration > 0):
        raise InvalidDuration(f"{name}: duration must be > 0 years (got {duration!r})")
    generations = int(generations)
    return EvolutionIndex(tech_name=name, generations=generations, duration=duration, ev=generations / duration)


def coevolution_index(
    components: Iterable[EvolutionIndex],
    threshold: float = COEVOLUTION_THRESHOLD,
) -> CoevolutionIndex:
    items = tuple(components)
    if len(items) < 2:
        raise TooFewComponents(f"coevolution needs at least 2 technologies (got {len(items)})")
    cv = math.prod(item.ev for item in items)
    warnings = []
    slow = [item.tech_name for item in items if item.ev < 1.0]
    if slow:
        message = (
            f"components with Ev < 1 ({', '.join(slow)}): CV no longer bounds every Ev from above"
        )
        LOGGER.warning(message)
        warnings.append(message)
    return CoevolutionIndex(components=items, cv=cv, threshold=threshold, warnings=tuple(warnings))


def coevolution_balance(host: EvolutionIndex, sub: EvolutionIndex) -> float:
    """Ratio of the subsystem's Ev to the host's; 1.0 lies on the line of perfect coevolution."""
    return sub.ev / host.ev


def parse_tech_spec(text: str) -> EvolutionIndex:
    """Parse ``NAME:GENERATIONS:YEARS`` into an :class:`EvolutionIndex`."""
    parts = text.rsplit(":", 2)
    if len(parts) != 3 or not parts[0].strip():
        raise DataError(f"malformed technology '{text}' (expected NAME:GENERATIONS:YEARS)")
    name, raw_generations, raw_years = (part.strip() for part in parts)
    try:
        generations = int(raw_generations)
    except ValueError:
        raise InvalidCount(f"{name}: generations '{raw_generations}' is not an integer") from None
    try:
        years = float(raw_years)
    except ValueError:
        raise InvalidDuration(f"{name}: years '{raw_years}' is not a number") from None
    return evolution_index(name, generations, years)


__all__ = [
    "EvolutionIndex",
    "CoevolutionIndex",
    "evolution_index",
    "coevolution_index",
    "coevolution_balance",
    "parse_tech_spec",
    "COEVOLUTION_THRESHOLD",
]
