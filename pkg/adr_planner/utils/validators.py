"""
Lightweight validation helpers.

These are plain Python utilities shared by the catalog readers and the
numeric services; pydantic covers the configuration documents.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from ..core.errors import CatalogError


def require_columns(header: Sequence[str], columns: Iterable[str]) -> None:
    """
    Raise CatalogError if any column is missing from a CSV header.
    The header always sits on line 1.
    """
    missing = [c for c in columns if c not in header]
    if missing:
        raise CatalogError(
            f"Missing column(s): {', '.join(missing)}", kind="missing_column", line=1
        )


def parse_float(raw: str, *, field: str, line: int) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise CatalogError(
            f"Cannot parse {field}={raw!r} as a number", kind="unparsable", line=line
        ) from None
    if not math.isfinite(value):
        raise CatalogError(f"{field} must be finite, got {raw!r}", kind="unparsable", line=line)
    return value
