"""Least-squares estimation of Cobb-Douglas and logistic production functions."""

import logging
import math
from collections.abc import Sequence

import numpy as np

from .config import config
from .errors import DegenerateDesign, DegenerateFit, NonPositiveInput, OutOfRange
from .lsq import nls_fit
from .models import (
    CobbDouglas,
    CobbDouglasFit,
    EconPanel,
    FitMode,
    LogisticProduction,
    LogisticProductionFit,
    NlsOptions,
)

logger = logging.getLogger(__name__)

# exp(ln C) stays a finite normal float inside this bound
LOG_C_BOUND = 700.0


def fit_cobb_douglas(
    panel: EconPanel, opts: NlsOptions | None = None, fix_crs: bool = False
) -> CobbDouglasFit:
    """Fit Y = A L^alpha K^beta by raw-scale nonlinear least squares.

    The log-linear OLS solution seeds the solver. With fix_crs the capital
    exponent is tied to 1 - alpha.

    Args:
        panel: Observed labor, capital and production
        opts: Solver settings
        fix_crs: Impose constant returns to scale

    Returns:
        CobbDouglasFit with the raw-scale rss
    """
    L, K, Y = _arrays(panel)
    log_L, log_K = np.log(L), np.log(K)

    if fix_crs:
        coef = _ols(np.column_stack([np.ones_like(L), log_L - log_K]), np.log(Y / K))
        start = coef

        def surface(p: np.ndarray) -> np.ndarray:
            return np.exp(p[0] + p[1] * log_L + (1.0 - p[1]) * log_K)

        def jacobian(p: np.ndarray) -> np.ndarray:
            f = surface(p)
            return -np.column_stack([f, f * (log_L - log_K)])

    else:
        start = _ols(np.column_stack([np.ones_like(L), log_L, log_K]), np.log(Y))

        def surface(p: np.ndarray) -> np.ndarray:
            return np.exp(p[0] + p[1] * log_L + p[2] * log_K)

        def jacobian(p: np.ndarray) -> np.ndarray:
            f = surface(p)
            return -np.column_stack([f, f * log_L, f * log_K])

    result = nls_fit(
        lambda p: Y - surface(p),
        start,
        jacobian=jacobian,
        opts=opts or config.nls_options(),
    )
    log_A, alpha = result.parameters[0], result.parameters[1]
    beta = 1.0 - alpha if fix_crs else result.parameters[2]

    fit = CobbDouglasFit(
        cd=CobbDouglas(A=math.exp(log_A), alpha=alpha, beta=beta),
        rss=result.rss,
        mode=FitMode.CRS if fix_crs else FitMode.UNCONSTRAINED,
        converged=result.converged,
        iterations=result.iterations,
    )
    logger.info(
        "Fitted Cobb-Douglas surface",
        extra={"mode": fit.mode.value, "alpha": alpha, "beta": beta, "rss": fit.rss},
    )
    return fit


def fit_cobb_douglas_scale(panel: EconPanel, alpha: float, beta: float) -> CobbDouglasFit:
    """Least-squares A for fixed exponents: A = sum(Y g) / sum(g^2), g = L^alpha K^beta."""
    L, K, Y = _arrays(panel)
    g = L**alpha * K**beta
    A = float(Y @ g) / float(g @ g)
    residuals = Y - A * g
    return CobbDouglasFit(
        cd=CobbDouglas(A=A, alpha=alpha, beta=beta),
        rss=float(residuals @ residuals),
        mode=FitMode.FIXED_EXPONENTS,
    )


def fit_logistic_production(
    panel: EconPanel,
    capacities: Sequence[float],
    opts: NlsOptions | None = None,
    init: Sequence[float] | None = None,
) -> LogisticProductionFit:
    """Fit (alpha, beta, C) of the logistic production function for fixed capacities.

    C is estimated as ln C so it stays positive. Without init the solver
    starts from the linear regression of ln(Y / |N_Y - Y|) on the input
    log-ratios.

    Args:
        panel: Observed labor, capital and production
        capacities: (N_L, N_K, N_Y)
        opts: Solver settings
        init: Starting (alpha, beta, C)

    Raises:
        OutOfRange: an observation sits exactly at its capacity
        DegenerateFit: the solver drove ln C outside [-LOG_C_BOUND, LOG_C_BOUND]
    """
    N_L, N_K, N_Y = (float(v) for v in capacities)
    if min(N_L, N_K, N_Y) <= 0:
        raise NonPositiveInput("capacities must be positive")
    L, K, Y = _arrays(panel)
    if np.any(L == N_L) or np.any(K == N_K) or np.any(Y == N_Y):
        raise OutOfRange("an observation equals its carrying capacity")

    # log-ratios ln(x / |N - x|)
    ratio_L = np.log(L) - np.log(np.abs(N_L - L))
    ratio_K = np.log(K) - np.log(np.abs(N_K - K))

    if init is not None:
        alpha0, beta0, C0 = (float(v) for v in init)
        if C0 <= 0:
            raise NonPositiveInput(f"initial C must be positive, got {C0}")
        start = np.array([alpha0, beta0, math.log(C0)])
    else:
        ratio_Y = np.log(Y) - np.log(np.abs(N_Y - Y))
        coef = _ols(np.column_stack([np.ones_like(L), ratio_L, ratio_K]), ratio_Y)
        start = np.array([coef[1], coef[2], -coef[0]])

    def odds(p: np.ndarray) -> np.ndarray:
        # C h / g
        with np.errstate(over="ignore"):
            return np.exp(p[2] - p[0] * ratio_L - p[1] * ratio_K)

    def residuals(p: np.ndarray) -> np.ndarray:
        return Y - N_Y / (1.0 + odds(p))

    def jacobian(p: np.ndarray) -> np.ndarray:
        u = odds(p)
        f = N_Y / (1.0 + u)
        weight = f * u / (1.0 + u)
        return -np.column_stack([weight * ratio_L, weight * ratio_K, -weight])

    result = nls_fit(residuals, start, jacobian=jacobian, opts=opts or config.nls_options())
    alpha, beta, log_C = result.parameters
    if not abs(log_C) <= LOG_C_BOUND:
        raise DegenerateFit(
            f"logistic production fit diverged: ln C = {log_C:.6g} is outside "
            f"[-{LOG_C_BOUND:g}, {LOG_C_BOUND:g}]"
        )

    fit = LogisticProductionFit(
        lp=LogisticProduction(
            N_L=N_L, N_K=N_K, N_Y=N_Y, C=math.exp(log_C), alpha=alpha, beta=beta
        ),
        rss=result.rss,
        converged=result.converged,
        iterations=result.iterations,
    )
    logger.info(
        "Fitted logistic production function",
        extra={"alpha": alpha, "beta": beta, "C": fit.lp.C, "rss": fit.rss},
    )
    return fit


def _arrays(panel: EconPanel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return (
        np.asarray(panel.labor, dtype=float),
        np.asarray(panel.capital, dtype=float),
        np.asarray(panel.production, dtype=float),
    )


def _ols(design: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Ordinary least squares coefficients; rank-deficient designs are rejected."""
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1]:
        raise DegenerateDesign(
            f"regression design has rank {rank}, needs {design.shape[1]}"
        )
    return np.asarray(coef, dtype=float)
