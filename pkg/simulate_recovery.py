#!/usr/bin/env python3
"""CLI to run synthetic estimator-recovery sweeps."""
from __future__ import annotations

from technometrics.cli import main_with

main = main_with("simulate")


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
