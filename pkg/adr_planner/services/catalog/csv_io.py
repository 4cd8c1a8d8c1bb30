# services/catalog/csv_io.py
"""
Catalog CSV reader/writer.

Schema: `id,a_km,i_deg,omega_deg,nu_deg`, UTF-8, LF line endings, dot
decimal. Diagnostics carry the 1-based file line (the header is line 1).
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import List

import pandas as pd

from ...core.config import Config
from ...core.errors import CatalogError, DomainError
from ...models import DebrisCatalog, DebrisEntry, OrbitalElements
from ...utils.angles import deg
from ...utils.validators import parse_float, require_columns

CSV_COLUMNS = ["id", "a_km", "i_deg", "omega_deg", "nu_deg"]

logger = logging.getLogger(__name__)


def load_csv(path: Path) -> DebrisCatalog:
    path = Path(path)
    if not path.is_file():
        raise CatalogError(f"Catalog file not found: {path}", kind="missing_file")

    frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    require_columns(list(frame.columns), CSV_COLUMNS)

    entries: List[DebrisEntry] = []
    seen: dict[str, int] = {}
    for offset, row in enumerate(frame.itertuples(index=False)):
        line = offset + 2
        record = row._asdict()
        debris_id = str(record["id"]).strip()
        if debris_id in seen:
            raise CatalogError(
                f"Duplicate debris id {debris_id!r} (first seen on line {seen[debris_id]})",
                kind="duplicate_id",
                line=line,
            )
        seen[debris_id] = line

        values = {name: parse_float(record[name], field=name, line=line) for name in CSV_COLUMNS[1:]}
        if values["a_km"] <= Config.R_EARTH:
            raise CatalogError(
                f"a_km={values['a_km']} is not above the Earth radius {Config.R_EARTH} km",
                kind="below_earth_radius",
                line=line,
            )
        try:
            elements = OrbitalElements.from_degrees(
                values["a_km"], values["i_deg"], values["omega_deg"], values["nu_deg"]
            )
        except DomainError as e:
            raise CatalogError(str(e), kind="unparsable", line=line) from e
        entries.append(DebrisEntry(debris_id, elements))

    logger.info("Loaded %d debris from %s", len(entries), path)
    return DebrisCatalog(tuple(entries))


def save_csv(catalog: DebrisCatalog, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        [
            {
                "id": entry.debris_id,
                "a_km": entry.elements.a,
                "i_deg": deg(entry.elements.i),
                "omega_deg": deg(entry.elements.omega),
                "nu_deg": deg(entry.elements.nu),
            }
            for entry in catalog
        ],
        columns=CSV_COLUMNS,
    )
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    return path
