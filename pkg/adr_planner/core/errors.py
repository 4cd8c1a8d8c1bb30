# core/errors.py
"""
Exception hierarchy shared by every service.

The CLI maps these onto exit codes: configuration / usage problems exit 2,
run-time failures exit 3.
"""

from __future__ import annotations

from typing import Optional


class PlannerError(Exception):
    """Base class for planner errors."""


class DomainError(PlannerError, ValueError):
    """Orbital-mechanics input outside its domain."""


class CatalogError(PlannerError, ValueError):
    """Catalog ingestion failure with an optional file line number."""

    def __init__(self, message: str, *, kind: str, line: Optional[int] = None) -> None:
        self.kind = kind
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class InvalidActionError(PlannerError, IndexError):
    """Action index outside [0, N)."""


class DimensionError(PlannerError, ValueError):
    """Network input, parameter shape or batch size mismatch."""


class OracleLimitError(PlannerError, ValueError):
    """Exhaustive search refused because the instance is too large."""


class ConfigError(PlannerError, ValueError):
    """Invalid run configuration."""


class TrainingError(PlannerError, RuntimeError):
    """Failure while training or evaluating an agent."""
