"""Debris catalog sources: CSV files, TLE files and the synthetic generator."""

from ...api.models import CatalogSource
from ...models import DebrisCatalog
from .csv_io import CSV_COLUMNS, load_csv, save_csv
from .generator import generate_cloud
from .tle import (
    TleRecord,
    load_tle,
    mean_motion_from_a,
    parse_tle,
    read_tle_records,
    semi_major_axis,
    tle_checksum,
)


def load_catalog(source: CatalogSource) -> DebrisCatalog:
    """Build the catalog from whichever single source is configured."""
    if source.csv_path is not None:
        return load_csv(source.csv_path)
    if source.tle_path is not None:
        return load_tle(source.tle_path)
    return generate_cloud(source.generator.n, source.generator.seed, source.generator)


__all__ = [
    "CSV_COLUMNS",
    "TleRecord",
    "generate_cloud",
    "load_catalog",
    "load_csv",
    "load_tle",
    "mean_motion_from_a",
    "parse_tle",
    "read_tle_records",
    "save_csv",
    "semi_major_axis",
    "tle_checksum",
]
