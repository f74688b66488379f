#!/usr/bin/env python3
"""CLI to compute evolution and coevolution indices of interacting technologies."""
from __future__ import annotations

from technometrics.cli import main_with

main = main_with("coevolve")


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
