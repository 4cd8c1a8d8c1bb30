# services/catalog/tle.py
"""
Two-line element set ingestion.

Only near-circular records (e < 0.05) are usable by the circular-orbit cost
model; others are skipped by `load_tle` with a warning. The semi-major axis
is recovered from mean motion, and the mean anomaly stands in for the true
anomaly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from ...core.config import Config
from ...core.errors import CatalogError
from ...models import DebrisCatalog, DebrisEntry, OrbitalElements
from ...utils.angles import TWO_PI
from ...utils.logger import get_logger

SECONDS_PER_DAY = 86400.0
MAX_ECCENTRICITY = 0.05
TLE_LINE_LENGTH = 69

log = get_logger(__name__)


def tle_checksum(line: str) -> int:
    """Mod-10 sum of the digits, each minus sign counting as 1."""
    total = 0
    for char in line:
        if char.isdigit():
            total += int(char)
        elif char == "-":
            total += 1
    return total % 10


@dataclass(frozen=True, slots=True)
class TleRecord:
    name: str
    line1: str
    line2: str
    satnum: int
    inclination_deg: float
    raan_deg: float  # stored, unused by the cost model
    eccentricity: float
    arg_perigee_deg: float
    mean_anomaly_deg: float
    mean_motion: float  # rev/day

    @classmethod
    def from_lines(cls, name: str, line1: str, line2: str, *, first_line: int = 1) -> "TleRecord":
        """Validate lengths and checksums, then slice the fixed columns of line 2."""
        line1, line2 = line1.rstrip("\r\n"), line2.rstrip("\r\n")
        for offset, (line, tag) in enumerate(((line1, "1"), (line2, "2")), start=1):
            where = first_line + offset
            if len(line) != TLE_LINE_LENGTH or not line.startswith(tag):
                raise CatalogError(
                    f"TLE line {tag} must be {TLE_LINE_LENGTH} characters starting with {tag!r}",
                    kind="unparsable",
                    line=where,
                )
            expected = tle_checksum(line[:-1])
            if not line[-1].isdigit() or int(line[-1]) != expected:
                raise CatalogError(
                    f"Checksum mismatch: line ends in {line[-1]!r}, expected {expected}",
                    kind="checksum",
                    line=where,
                )

        try:
            return cls(
                name=name.strip() or line1[2:7].strip(),
                line1=line1,
                line2=line2,
                satnum=int(line2[2:7]),
                inclination_deg=float(line2[8:16]),
                raan_deg=float(line2[17:25]),
                eccentricity=float("." + line2[26:33].strip()),
                arg_perigee_deg=float(line2[34:42]),
                mean_anomaly_deg=float(line2[43:51]),
                mean_motion=float(line2[52:63]),
            )
        except ValueError as e:
            raise CatalogError(f"Malformed TLE field: {e}", kind="unparsable", line=first_line + 2) from None


def semi_major_axis(mean_motion_rev_day: float, mu: float = Config.MU_EARTH) -> float:
    if not mean_motion_rev_day > 0:
        raise CatalogError(f"Mean motion must be positive, got {mean_motion_rev_day}", kind="unparsable")
    period = SECONDS_PER_DAY / mean_motion_rev_day
    return (mu * (period / TWO_PI) ** 2) ** (1.0 / 3.0)


def mean_motion_from_a(a: float, mu: float = Config.MU_EARTH) -> float:
    """Revolutions per day of a circular orbit of radius `a`."""
    period = TWO_PI * math.sqrt(a**3 / mu)
    return SECONDS_PER_DAY / period


def parse_tle(record: TleRecord, mu: float = Config.MU_EARTH) -> OrbitalElements:
    if record.eccentricity >= MAX_ECCENTRICITY:
        raise CatalogError(
            f"{record.name}: eccentricity {record.eccentricity} violates the near-circular bound "
            f"e < {MAX_ECCENTRICITY}",
            kind="eccentricity",
        )
    return OrbitalElements.from_degrees(
        semi_major_axis(record.mean_motion, mu),
        record.inclination_deg,
        record.arg_perigee_deg,
        record.mean_anomaly_deg,
    )


def read_tle_records(path: Path) -> List[TleRecord]:
    """Three-line records (name, line 1, line 2); a missing name line is allowed."""
    path = Path(path)
    if not path.is_file():
        raise CatalogError(f"TLE file not found: {path}", kind="missing_file")

    lines = [(no, raw.rstrip("\r\n")) for no, raw in enumerate(path.read_text("utf-8").splitlines(), 1)]
    lines = [(no, text) for no, text in lines if text.strip()]

    records: List[TleRecord] = []
    i = 0
    while i < len(lines):
        no, text = lines[i]
        name: Optional[str] = None
        if not text.startswith("1 "):
            name = text[2:] if text.startswith("0 ") else text
            i += 1
        if i + 1 >= len(lines):
            raise CatalogError("Truncated TLE record", kind="unparsable", line=no)
        (no1, line1), (_, line2) = lines[i], lines[i + 1]
        records.append(TleRecord.from_lines(name or "", line1, line2, first_line=no1 - 1))
        i += 2
    return records


def load_tle(path: Path, mu: float = Config.MU_EARTH) -> DebrisCatalog:
    entries: List[DebrisEntry] = []
    skipped = 0
    for record in read_tle_records(path):
        try:
            elements = parse_tle(record, mu)
        except CatalogError as e:
            if e.kind != "eccentricity":
                raise
            log.warning("tle_record_skipped", name=record.name, eccentricity=record.eccentricity)
            skipped += 1
            continue
        entries.append(DebrisEntry(record.name, elements))

    log.info("tle_loaded", path=str(path), accepted=len(entries), skipped=skipped)
    return DebrisCatalog(tuple(entries))
