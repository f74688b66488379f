#!/usr/bin/env python3
"""CLI to estimate the evolutionary coefficient B of a host/subsystem pair."""
from __future__ import annotations

from technometrics.cli import main_with

main = main_with("analyze")


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
