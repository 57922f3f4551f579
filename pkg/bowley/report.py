"""
Deterministic report serialization.

JSON reports sort their keys and print every float with 17 significant digits,
so identical inputs give byte-identical files. The CSV variant flattens the
same data into key,value rows with dotted keys.
"""

import hashlib
import json
import logging
import math
from collections.abc import Iterator
from pathlib import Path
from typing import Any, BinaryIO

import pandas as pd

from .errors import ReportIoError
from .models import EconPanel
from .schemas import InputDigest, RunReport

logger = logging.getLogger(__name__)

Sink = BinaryIO | str | Path

FORMATS = ("json", "csv")


def emit_report(report: RunReport, fmt: str, sink: Sink) -> None:
    """Write `report` as JSON or key,value CSV.

    Raises:
        ValueError: Unknown format
        ReportIoError: The sink cannot be written
    """
    data = report.model_dump(mode="json")
    if fmt == "json":
        text = render_json(data) + "\n"
    elif fmt == "csv":
        text = render_csv(data)
    else:
        raise ValueError(f"Unknown report format: {fmt}. Must be one of {FORMATS}")
    _write(text.encode("utf-8"), sink)
    logger.info("Wrote report", extra={"format": fmt, "command": report.command})


def emit_panel_csv(panel: EconPanel, sink: Sink) -> None:
    """Write a panel back out as `year,labor,capital,production` CSV."""
    frame = pd.DataFrame(
        {
            "year": panel.years,
            "labor": panel.labor,
            "capital": panel.capital,
            "production": panel.production,
        }
    )
    text = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    _write(text.encode("utf-8"), sink)


def input_digest(path: str | Path, rows: int) -> InputDigest:
    """Path, row count and SHA-256 of an input file."""
    path = Path(path)
    try:
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
    except OSError as e:
        raise ReportIoError(f"Cannot read {path}: {e}") from e
    return InputDigest(path=str(path), rows=rows, sha256=digest)


def render_json(value: Any, indent: int = 0) -> str:
    """Serialize JSON data with sorted keys and 17-significant-digit floats."""
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(key))}: {render_json(value[key], indent + 1)}"
            for key in sorted(value)
        ]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, list | tuple):
        if not value:
            return "[]"
        items = [f"{pad}{render_json(item, indent + 1)}" for item in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return _scalar(value, json_null=True)


def render_csv(data: dict[str, Any]) -> str:
    """Flatten nested data into key,value rows, one per scalar field."""
    rows = [(key, _scalar(value)) for key, value in _flatten(data)]
    frame = pd.DataFrame(rows, columns=["key", "value"])
    return str(frame.to_csv(index=False, lineterminator="\n"))


def _flatten(value: Any, prefix: str = "") -> Iterator[tuple[str, Any]]:
    if isinstance(value, dict):
        for key in sorted(value):
            yield from _flatten(value[key], f"{prefix}{key}.")
    elif isinstance(value, list | tuple):
        for i, item in enumerate(value):
            yield from _flatten(item, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), value


def _scalar(value: Any, json_null: bool = False) -> str:
    if value is None:
        return "null" if json_null else ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null" if json_null else ""
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    return json.dumps(str(value)) if json_null else str(value)


def _write(payload: bytes, sink: Sink) -> None:
    try:
        if isinstance(sink, str | Path):
            Path(sink).write_bytes(payload)
        else:
            sink.write(payload)
            sink.flush()
    except OSError as e:
        raise ReportIoError(f"Cannot write report: {e}") from e

