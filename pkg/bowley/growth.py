"""Exponential and logistic growth fits for labor, capital and production."""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import config
from .errors import DegenerateFit, InitOutOfRange, LengthMismatch, NonPositiveInput
from .lsq import linear_fit, nls_fit
from .models import (
    PANEL_COLUMNS,
    EconPanel,
    ExpFit,
    LogisticFit,
    NlsOptions,
    TripleFit,
)

logger = logging.getLogger(__name__)

# Capacity above this multiple of the data maximum is weakly identified
NEAR_DEGENERATE_RATIO = 10.0
CAPACITY_HEADROOM = 1.05
FALLBACK_RATE = 1e-3


def fit_exponential(series: Sequence[float], t: Sequence[float] | None = None) -> ExpFit:
    """Fit x0 * exp(b t) by linear regression of ln(series) on t.

    Args:
        series: Positive observations
        t: Time index (default 0, 1, ...)

    Returns:
        ExpFit with both the log-scale and raw-scale rss

    Raises:
        NonPositiveInput: A value is zero or negative
        DegenerateDesign: Fewer than two points
    """
    y, ts = _as_series(series, t)
    line = linear_fit(ts, np.log(y))
    b, c = line.slope, line.intercept
    residuals = y - math.exp(c) * np.exp(b * ts)

    fit = ExpFit(
        b=b,
        x0=math.exp(c),
        c=c,
        rss_log=line.rss,
        rss_raw=float(residuals @ residuals),
    )
    logger.debug("Fitted exponential growth", extra={"b": fit.b, "c": fit.c})
    return fit


def eval_exponential(fit: ExpFit, t: float) -> float:
    """x0 * exp(b t)."""
    return fit.x0 * math.exp(fit.b * t)


def eval_logistic(fit: LogisticFit, t: float) -> float:
    """N x0 / (x0 + (N - x0) exp(-b t))."""
    return float(_logistic_curve(fit.b, fit.x0, fit.N, np.asarray(t, dtype=float)))


def logistic_rhs(fit: LogisticFit, x: float) -> float:
    """Logistic vector field b x (1 - x/N)."""
    return fit.b * x * (1.0 - x / fit.N)


def fit_logistic(
    series: Sequence[float],
    init: Sequence[float] | None = None,
    opts: NlsOptions | None = None,
    t: Sequence[float] | None = None,
) -> LogisticFit:
    """Fit a logistic curve to raw-scale observations.

    Args:
        series: Positive observations
        init: Starting (b, x0, N); a logit-regression warm start when omitted
        opts: Solver settings
        t: Time index (default 0, 1, ...)

    Returns:
        LogisticFit, flagged near_degenerate when the capacity is weakly
        identified or the solver did not converge

    Raises:
        InitOutOfRange: init violates 0 < x0 < N or max(series) >= N
        DegenerateFit: the solver leaves the logistic parameter domain
    """
    y, ts = _as_series(series, t)
    start = _check_init(init, y) if init is not None else _default_init(y, ts)

    def residuals(p: np.ndarray) -> np.ndarray:
        b, x0, N = p
        return y - _logistic_curve(b, x0, N, ts)

    def jacobian(p: np.ndarray) -> np.ndarray:
        b, x0, N = p
        E = np.exp(-b * ts)
        D = x0 + (N - x0) * E
        d_b = N * x0 * (N - x0) * ts * E / D**2
        d_x0 = N**2 * E / D**2
        d_N = x0**2 * (1.0 - E) / D**2
        return -np.column_stack([d_b, d_x0, d_N])

    result = nls_fit(residuals, start, jacobian=jacobian, opts=opts or config.nls_options())
    b, x0, N = result.parameters
    if not (b > 0 and 0 < x0 < N):
        raise DegenerateFit(
            f"logistic fit left its domain: b={b:.7g}, x0={x0:.7g}, N={N:.7g}"
        )

    near_degenerate = N >= NEAR_DEGENERATE_RATIO * float(y.max()) or not result.converged
    if near_degenerate:
        logger.warning(
            "Logistic capacity is weakly identified",
            extra={"N": N, "max_value": float(y.max()), "converged": result.converged},
        )
    return LogisticFit(
        b=b,
        x0=x0,
        N=N,
        rss=result.rss,
        converged=result.converged,
        near_degenerate=near_degenerate,
        termination=result.termination,
    )


def fit_panel_exponential(panel: EconPanel) -> TripleFit:
    """Exponential fits for all three panel columns on the panel's time index."""
    fits = {name: fit_exponential(panel.column(name), panel.t) for name in PANEL_COLUMNS}
    logger.info(
        "Fitted exponential growth for panel",
        extra={name: fit.b for name, fit in fits.items()},
    )
    return TripleFit(**fits)


def fit_panel_logistic(
    panel: EconPanel,
    init: dict[str, Sequence[float]] | None = None,
    opts: NlsOptions | None = None,
    max_workers: int | None = None,
) -> TripleFit:
    """Logistic fits for all three panel columns, run on a thread pool.

    Args:
        panel: Validated panel
        init: Optional starting (b, x0, N) per column name
        opts: Solver settings shared by the three fits
        max_workers: Thread count (default from configuration)
    """
    init = init or {}
    with ThreadPoolExecutor(max_workers=max_workers or config.max_workers) as executor:
        futures = {
            name: executor.submit(
                fit_logistic, panel.column(name), init.get(name), opts, panel.t
            )
            for name in PANEL_COLUMNS
        }
        fits = {name: future.result() for name, future in futures.items()}

    logger.info(
        "Fitted logistic growth for panel",
        extra={f"{name}_N": fit.N for name, fit in fits.items()},
    )
    return TripleFit(**fits)


def _as_series(
    series: Sequence[float], t: Sequence[float] | None
) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(series, dtype=float)
    ts = np.arange(y.size, dtype=float) if t is None else np.asarray(t, dtype=float)
    if ts.shape != y.shape:
        raise LengthMismatch(f"time index has {ts.size} values, series has {y.size}")
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        raise NonPositiveInput("growth fits need finite positive values")
    return y, ts


def _logistic_curve(b: float, x0: float, N: float, t: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return N * x0 / (x0 + (N - x0) * np.exp(-b * t))


def _check_init(init: Sequence[float], y: np.ndarray) -> np.ndarray:
    b, x0, N = (float(v) for v in init)
    if not 0 < x0 < N:
        raise InitOutOfRange(f"initial guess needs 0 < x0 < N, got x0={x0}, N={N}")
    if float(y.max()) >= N:
        raise InitOutOfRange(
            f"initial capacity N={N} does not exceed the series maximum {y.max()}"
        )
    return np.array([b, x0, N])


def _default_init(y: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Self-starting guess: N above the data, x0 the first value, b from a logit line."""
    N = CAPACITY_HEADROOM * float(y.max())
    logit = np.log(y / (N - y))
    b = linear_fit(ts, logit).slope
    if b <= 0:
        b = FALLBACK_RATE
    start = np.array([b, float(y[0]), N])
    logger.debug("Logistic warm start", extra={"b": b, "x0": start[1], "N": N})
    return start
