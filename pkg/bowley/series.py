"""CSV ingestion and validation for labor/capital/production panels."""

import io
import logging
import math
import re
from pathlib import Path
from typing import BinaryIO

import pandas as pd

from .errors import MalformedCsv, NonPositiveValue, NonUniformYearStep, TooFewRows
from .models import PANEL_COLUMNS, EconPanel, ValidationReport, panel_issues

logger = logging.getLogger(__name__)

HEADER = ("year",) + PANEL_COLUMNS

# Plain or scientific decimal, dot separator, no grouping.
_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_INTEGER = re.compile(r"[+-]?\d+")


def ingest_csv(source: BinaryIO | bytes, origin_year: int | None = None) -> EconPanel:
    """Parse a `year,labor,capital,production` CSV into a validated panel.

    Args:
        source: UTF-8 CSV bytes or a binary stream
        origin_year: Calendar year mapped to t = 0 (default: first year)

    Returns:
        EconPanel satisfying every panel invariant

    Raises:
        MalformedCsv: Bad header, encoding, missing or unparsable cell
        NonPositiveValue: A value is zero or negative
        NonUniformYearStep: Years are not consecutive
        TooFewRows: Fewer than three data rows
    """
    raw = source if isinstance(source, bytes) else source.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise MalformedCsv(f"input is not valid UTF-8: {e}") from e

    lines = _record_lines(text)
    frame = _read_frame(text, header_line=lines[0] if lines else 1)
    years, columns = _parse_rows(frame, lines)

    if len(years) < 3:
        raise TooFewRows(f"panel has {len(years)} rows, at least 3 required")

    for i in range(1, len(years)):
        if years[i] - years[i - 1] != 1:
            raise NonUniformYearStep(
                f"year step {years[i - 1]} -> {years[i]} is not 1",
                row=lines[i + 1],
                column="year",
            )

    origin = years[0] if origin_year is None else origin_year
    panel = EconPanel(
        years=tuple(years),
        labor=tuple(columns["labor"]),
        capital=tuple(columns["capital"]),
        production=tuple(columns["production"]),
        origin_year=origin,
    )
    logger.info(
        f"Ingested panel of {len(panel)} rows",
        extra={"first_year": years[0], "last_year": years[-1], "origin_year": origin},
    )
    return panel


def read_panel(path: str | Path, origin_year: int | None = None) -> EconPanel:
    """Read a panel CSV from disk.

    Raises:
        FileNotFoundError: When the path does not exist
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Input file not found: {path}")
    with path.open("rb") as handle:
        return ingest_csv(handle, origin_year=origin_year)


def validate_panel(panel: EconPanel) -> ValidationReport:
    """Re-check every panel invariant, reporting all violations."""
    issues = panel_issues(panel.years, panel.columns())
    if issues:
        logger.warning(
            f"Panel failed validation with {len(issues)} issue(s)",
            extra={"issue_count": len(issues)},
        )
    return ValidationReport(ok=not issues, issues=tuple(issues))


def _read_frame(text: str, header_line: int = 1) -> pd.DataFrame:
    """Read CSV text with every cell kept as a string."""
    try:
        frame = pd.read_csv(
            io.StringIO(text),
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError as e:
        raise MalformedCsv("input is empty") from e
    except pd.errors.ParserError as e:
        raise MalformedCsv(f"cannot parse CSV: {e}") from e

    header = tuple(str(name).strip() for name in frame.columns)
    if header != HEADER:
        raise MalformedCsv(
            f"header must be {','.join(HEADER)}, got {','.join(header)}", row=header_line
        )
    return frame


def _record_lines(text: str) -> list[int]:
    """1-based file line of each record pandas reads, header first.

    Blank and whitespace-only lines are skipped by the reader but still
    count towards the line numbers cited in errors.
    """
    return [
        number
        for number, raw in enumerate(text.splitlines(), start=1)
        if raw.strip(" \t")
    ]


def _parse_rows(
    frame: pd.DataFrame, lines: list[int]
) -> tuple[list[int], dict[str, list[float]]]:
    """Convert string cells to typed values, citing the file line on failure."""
    years: list[int] = []
    columns: dict[str, list[float]] = {name: [] for name in PANEL_COLUMNS}

    for i, row in enumerate(frame.itertuples(index=False, name=None)):
        line = lines[i + 1]
        years.append(_parse_year(row[0], line))
        for name, cell in zip(PANEL_COLUMNS, row[1:], strict=True):
            value = _parse_decimal(cell, line, name)
            if value <= 0:
                raise NonPositiveValue(
                    f"{name} value {str(cell).strip()} is not positive",
                    row=line,
                    column=name,
                )
            columns[name].append(value)

    return years, columns


def _parse_year(cell: object, line: int) -> int:
    text = _cell_text(cell, line, "year")
    if not _INTEGER.fullmatch(text):
        raise MalformedCsv(f"year '{text}' is not an integer", row=line, column="year")
    return int(text)


def _parse_decimal(cell: object, line: int, column: str) -> float:
    text = _cell_text(cell, line, column)
    if not _DECIMAL.fullmatch(text):
        raise MalformedCsv(f"'{text}' is not a decimal number", row=line, column=column)
    value = float(text)
    if not math.isfinite(value):
        raise MalformedCsv(f"'{text}' overflows a double", row=line, column=column)
    return value


def _cell_text(cell: object, line: int, column: str) -> str:
    """Return the stripped cell text; missing cells are hard errors."""
    if not isinstance(cell, str) or not cell.strip():
        raise MalformedCsv("missing value", row=line, column=column)
    return cell.strip()
