"""Data models for panels, fits, production functions and jet points."""

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

PANEL_COLUMNS = ("labor", "capital", "production")


class ValidationIssue(BaseModel):
    """One violated panel invariant."""

    model_config = ConfigDict(frozen=True)

    row: int | None = Field(None, description="Zero-based row index, if row specific")
    column: str | None = Field(None, description="Column name, if column specific")
    message: str = Field(..., min_length=1, description="Human readable problem")


class ValidationReport(BaseModel):
    """All violations found in a panel."""

    model_config = ConfigDict(frozen=True)

    ok: bool
    issues: tuple[ValidationIssue, ...] = ()

    @model_validator(mode="after")
    def check_ok_matches_issues(self) -> "ValidationReport":
        """ok is true iff there are no issues."""
        if self.ok != (len(self.issues) == 0):
            raise ValueError("ok must be true exactly when issues is empty")
        return self


def panel_issues(
    years: tuple[int, ...],
    columns: dict[str, tuple[float, ...]],
) -> list[ValidationIssue]:
    """Check every EconPanel invariant and collect all violations."""
    issues: list[ValidationIssue] = []
    n = len(years)

    for name, values in columns.items():
        if len(values) != n:
            issues.append(
                ValidationIssue(
                    column=name,
                    message=f"{name} has {len(values)} values but there are {n} years",
                )
            )

    if n < 3:
        issues.append(ValidationIssue(message=f"panel has {n} rows, at least 3 required"))

    for i in range(1, n):
        if years[i] - years[i - 1] != 1:
            issues.append(
                ValidationIssue(
                    row=i,
                    column="year",
                    message=f"year step {years[i - 1]} -> {years[i]} is not 1",
                )
            )

    for name, values in columns.items():
        for i, value in enumerate(values):
            if not math.isfinite(value):
                issues.append(
                    ValidationIssue(row=i, column=name, message=f"{name} is not finite")
                )
            elif value <= 0:
                issues.append(
                    ValidationIssue(
                        row=i, column=name, message=f"{name} value {value!r} is not positive"
                    )
                )

    return issues


class EconPanel(BaseModel):
    """Aligned labor, capital and production series indexed by calendar year."""

    model_config = ConfigDict(frozen=True)

    years: tuple[int, ...] = Field(..., description="Strictly increasing unit-step years")
    labor: tuple[float, ...] = Field(..., description="Labor index per year")
    capital: tuple[float, ...] = Field(..., description="Capital index per year")
    production: tuple[float, ...] = Field(..., description="Production index per year")
    origin_year: int = Field(..., description="Calendar year mapped to t = 0")

    @model_validator(mode="after")
    def check_invariants(self) -> "EconPanel":
        """Reject panels that violate any invariant."""
        issues = panel_issues(self.years, self.columns())
        if issues:
            raise ValueError("; ".join(issue.message for issue in issues))
        return self

    def columns(self) -> dict[str, tuple[float, ...]]:
        """The three value columns keyed by name."""
        return {
            "labor": self.labor,
            "capital": self.capital,
            "production": self.production,
        }

    def column(self, name: str) -> tuple[float, ...]:
        """Look up one value column by name."""
        if name not in PANEL_COLUMNS:
            raise KeyError(f"Unknown panel column: {name}")
        return self.columns()[name]

    @property
    def t(self) -> tuple[int, ...]:
        """Time index t = year - origin_year."""
        return tuple(year - self.origin_year for year in self.years)

    def __len__(self) -> int:
        return len(self.years)


# Least squares


class LinearFit(BaseModel):
    """Least-squares line y = intercept + slope * t."""

    model_config = ConfigDict(frozen=True)

    slope: float
    intercept: float
    rss: float = Field(..., ge=0.0)


class NlsOptions(BaseModel):
    """Levenberg-Marquardt termination and damping settings."""

    model_config = ConfigDict(frozen=True)

    max_iterations: int = Field(default=200, gt=0)
    gradient_tolerance: float = Field(default=1e-10, gt=0.0)
    step_tolerance: float = Field(default=1e-12, gt=0.0)
    initial_damping: float = Field(default=1e-3, gt=0.0)


class Termination(Enum):
    """Why a nonlinear least-squares run stopped."""

    GRADIENT_SMALL = "GradientSmall"
    STEP_SMALL = "StepSmall"
    MAX_ITERATIONS = "MaxIterations"


class NlsResult(BaseModel):
    """Outcome of a Levenberg-Marquardt run."""

    model_config = ConfigDict(frozen=True)

    parameters: tuple[float, ...]
    rss: float = Field(..., ge=0.0)
    iterations: int = Field(..., ge=0)
    converged: bool
    termination: Termination
    rss_history: tuple[float, ...] = Field(
        default=(), description="rss at the start and after every accepted step"
    )

    @model_validator(mode="after")
    def check_converged(self) -> "NlsResult":
        """converged is equivalent to not running out of iterations."""
        if self.converged != (self.termination is not Termination.MAX_ITERATIONS):
            raise ValueError("converged must match the termination reason")
        return self


# Growth fits


class ExpFit(BaseModel):
    """Exponential flow x0 * exp(b t) fitted on the log scale."""

    model_config = ConfigDict(frozen=True)

    b: float = Field(..., description="Growth rate per unit time")
    x0: float = Field(..., gt=0.0, description="Level at t = 0")
    c: float = Field(..., description="ln x0, the log-scale intercept")
    rss_log: float = Field(default=0.0, ge=0.0)
    rss_raw: float = Field(default=0.0, ge=0.0)

    @model_validator(mode="after")
    def check_intercept(self) -> "ExpFit":
        """x0 and c describe the same level."""
        if not math.isclose(self.x0, math.exp(self.c), rel_tol=1e-12):
            raise ValueError("x0 must equal exp(c)")
        return self

    @classmethod
    def from_rate(cls, b: float, x0: float) -> "ExpFit":
        """Build a fit from a growth rate and an initial level."""
        return cls(b=b, x0=x0, c=math.log(x0))


class LogisticFit(BaseModel):
    """Logistic flow with rate b, initial level x0 and carrying capacity N."""

    model_config = ConfigDict(frozen=True)

    b: float = Field(..., gt=0.0)
    x0: float = Field(..., gt=0.0)
    N: float = Field(..., gt=0.0, description="Carrying capacity")
    rss: float = Field(default=0.0, ge=0.0)
    converged: bool = True
    near_degenerate: bool = Field(
        default=False, description="Capacity weakly identified by the data"
    )
    termination: Termination | None = None

    @model_validator(mode="after")
    def check_below_capacity(self) -> "LogisticFit":
        """The initial level lies below the capacity."""
        if not self.x0 < self.N:
            raise ValueError("x0 must be below the carrying capacity N")
        return self


class TripleFit(BaseModel):
    """Homogeneous fits of labor, capital and production on one time index."""

    model_config = ConfigDict(frozen=True)

    labor: ExpFit | LogisticFit
    capital: ExpFit | LogisticFit
    production: ExpFit | LogisticFit

    @model_validator(mode="after")
    def check_homogeneous(self) -> "TripleFit":
        """All three fits come from the same growth family."""
        kinds = {type(fit) for fit in (self.labor, self.capital, self.production)}
        if len(kinds) != 1:
            raise ValueError("labor, capital and production fits must share one family")
        return self

    @property
    def rates(self) -> tuple[float, float, float]:
        """Growth rates (b1, b2, b3) for labor, capital, production."""
        return (self.labor.b, self.capital.b, self.production.b)

    @property
    def is_logistic(self) -> bool:
        return isinstance(self.labor, LogisticFit)


# Invariants and production functions


class ReturnsClass(Enum):
    """Position of the production rate relative to the input rates."""

    CRS_ATTAINABLE = "CrsAttainable"
    INCREASING_ONLY = "IncreasingOnly"
    DECREASING_ONLY = "DecreasingOnly"
    DEGENERATE = "Degenerate"


class ElasticitySolution(BaseModel):
    """Output elasticities on the orthogonality line with alpha + beta = 1."""

    model_config = ConfigDict(frozen=True)

    alpha: float | None = Field(None, description="Labor elasticity, None if b1 = b2")
    beta: float | None = Field(None, description="Capital elasticity, None if b1 = b2")
    classification: ReturnsClass

    @model_validator(mode="after")
    def check_crs(self) -> "ElasticitySolution":
        """CRS solutions have positive elasticities summing to one."""
        if self.classification is ReturnsClass.CRS_ATTAINABLE:
            if self.alpha is None or self.beta is None:
                raise ValueError("CRS solution needs both elasticities")
            if self.alpha <= 0 or self.beta <= 0:
                raise ValueError("CRS elasticities must be positive")
            if abs(self.alpha + self.beta - 1.0) > 1e-12:
                raise ValueError("CRS elasticities must sum to one")
        return self


class CobbDouglas(BaseModel):
    """Y = A L^alpha K^beta."""

    model_config = ConfigDict(frozen=True)

    A: float = Field(..., gt=0.0, description="Total factor productivity")
    alpha: float = Field(..., description="Labor exponent")
    beta: float = Field(..., description="Capital exponent")


class LogisticProduction(BaseModel):
    """Production function induced by logistic growth in L, K and Y."""

    model_config = ConfigDict(frozen=True)

    N_L: float = Field(..., gt=0.0)
    N_K: float = Field(..., gt=0.0)
    N_Y: float = Field(..., gt=0.0)
    C: float = Field(..., gt=0.0)
    alpha: float
    beta: float


class SShaped(BaseModel):
    """Y = a K^p L^(1-p) / (1 + b K^p L^-p)."""

    model_config = ConfigDict(frozen=True)

    a: float = Field(..., gt=0.0)
    b: float = Field(..., ge=0.0)
    p: float = Field(..., gt=0.0, lt=1.0)


class FitMode(Enum):
    """Constraint applied in a Cobb-Douglas fit."""

    UNCONSTRAINED = "unconstrained"
    CRS = "crs"
    FIXED_EXPONENTS = "fixed_exponents"


class CobbDouglasFit(BaseModel):
    """Cobb-Douglas surface fitted to observed production."""

    model_config = ConfigDict(frozen=True)

    cd: CobbDouglas
    rss: float = Field(..., ge=0.0)
    mode: FitMode
    converged: bool = True
    iterations: int = 0


class LogisticProductionFit(BaseModel):
    """Logistic production function fitted for fixed capacities."""

    model_config = ConfigDict(frozen=True)

    lp: LogisticProduction
    rss: float = Field(..., ge=0.0)
    converged: bool = True
    iterations: int = 0


# Prolongation and shares


class Generator(BaseModel):
    """Scaling generator u = aK d/dK + bL d/dL + cY d/dY."""

    model_config = ConfigDict(frozen=True)

    a: float = Field(..., allow_inf_nan=False)
    b: float = Field(..., allow_inf_nan=False)
    c: float = Field(..., allow_inf_nan=False)


class JetPoint(BaseModel):
    """Point (K, L, Y, Y_K, Y_L) of the first jet space."""

    model_config = ConfigDict(frozen=True)

    K: float = Field(..., gt=0.0, allow_inf_nan=False)
    L: float = Field(..., gt=0.0, allow_inf_nan=False)
    Y: float = Field(..., gt=0.0, allow_inf_nan=False)
    Y_K: float = Field(..., allow_inf_nan=False)
    Y_L: float = Field(..., allow_inf_nan=False)


class ShareMethod(Enum):
    """How a factor share was computed."""

    ANALYTIC = "Analytic"
    INVARIANTS = "Invariants"
    NUMERIC_DERIVATIVE = "NumericDerivative"


class ShareReport(BaseModel):
    """Labor and capital shares at one point."""

    model_config = ConfigDict(frozen=True)

    s_L: float
    s_K: float
    method: ShareMethod


class ConstancySummary(BaseModel):
    """How much a share moves along a trajectory."""

    model_config = ConfigDict(frozen=True)

    mean: float
    max_abs_deviation: float = Field(..., ge=0.0)
    relative_range: float = Field(..., ge=0.0)
    minimum: float
    maximum: float
    count: int = Field(..., ge=1)
