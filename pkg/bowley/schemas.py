"""
Pydantic schemas for command results.

These models describe what a `bowley` subcommand reports: an echo of the
command, a digest of the input file, fitted parameters and check outcomes.
"""

from typing import Any

from pydantic import BaseModel, Field

from . import __version__


class InputDigest(BaseModel):
    """Identity of the CSV a report was computed from."""

    path: str
    rows: int = Field(..., ge=0)
    sha256: str = Field(..., pattern="^[0-9a-f]{64}$")


class NamedSeries(BaseModel):
    """One labelled (t, value) sequence for plotting."""

    name: str = Field(..., min_length=1)
    t: list[float] = Field(default_factory=list)
    values: list[float] = Field(default_factory=list)


class PropertyCheck(BaseModel):
    """Outcome of one executable property."""

    name: str
    passed: bool
    metric: float  # worst observed value of the checked quantity
    tolerance: float
    detail: str = ""


class RunReport(BaseModel):
    """Everything one subcommand produced."""

    command: str
    arguments: dict[str, Any] = Field(default_factory=dict)
    input: InputDigest | None = None
    parameters: dict[str, Any] = Field(default_factory=dict)
    rss: dict[str, float] = Field(default_factory=dict)
    classification: str | None = None
    shares: dict[str, float] = Field(default_factory=dict)
    checks: list[PropertyCheck] = Field(default_factory=list)
    version: str = __version__
