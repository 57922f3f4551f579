"""
Factor shares as differential invariants of scaling generators.

The labor share (dY/dL) L / Y and capital share (dY/dK) K / Y are computed
three ways: from the fundamental invariants of a prolonged scaling generator,
by central differences on any production surface, and in closed form for the
logistic production function.
"""

import logging
import math
from collections.abc import Callable, Sequence

import numpy as np

from .config import config
from .errors import (
    AtCapacity,
    DegenerateFit,
    EmptySeries,
    NonFiniteValue,
    ZeroDenominator,
    ZeroScaleCoefficient,
)
from .invariants import abs_power
from .models import (
    ConstancySummary,
    Generator,
    JetPoint,
    LogisticFit,
    LogisticProduction,
    ShareMethod,
    ShareReport,
    TripleFit,
)

logger = logging.getLogger(__name__)

# Production surface evaluated as f(L, K)
Surface = Callable[[float, float], float]
Flow = Callable[[float], float]


def prolonged_coefficients(g: Generator, p: JetPoint) -> np.ndarray:
    """Components (aK, bL, cY, (c-a)Y_K, (c-b)Y_L) of the prolonged generator at p."""
    return np.array(
        [
            g.a * p.K,
            g.b * p.L,
            g.c * p.Y,
            (g.c - g.a) * p.Y_K,
            (g.c - g.b) * p.Y_L,
        ]
    )


def fundamental_invariants(g: Generator, p: JetPoint) -> np.ndarray:
    """I1 = L K^(-b/a), I2 = Y K^(-c/a), I3 = Y_K K^((a-c)/a), I4 = Y_L K^((b-c)/a).

    Raises:
        ZeroScaleCoefficient: The capital coefficient a is zero
    """
    if g.a == 0:
        raise ZeroScaleCoefficient("generator capital coefficient a is zero")
    return np.array(
        [
            p.L * p.K ** (-g.b / g.a),
            p.Y * p.K ** (-g.c / g.a),
            p.Y_K * p.K ** ((g.a - g.c) / g.a),
            p.Y_L * p.K ** ((g.b - g.c) / g.a),
        ]
    )


def shares_from_invariants(invariants: Sequence[float]) -> ShareReport:
    """s_L = I1 I4 / I2 and s_K = I3 / I2.

    Raises:
        ZeroDenominator: I2 is zero
    """
    i1, i2, i3, i4 = (float(v) for v in invariants)
    if i2 == 0:
        raise ZeroDenominator("invariant I2 is zero")
    return ShareReport(s_L=i1 * i4 / i2, s_K=i3 / i2, method=ShareMethod.INVARIANTS)


def numeric_wage_share(
    f: Surface, L: float, K: float, h: float | None = None
) -> ShareReport:
    """Labor and capital shares of f at (L, K) by central differences.

    Args:
        f: Production surface f(L, K)
        L: Labor input
        K: Capital input
        h: Relative step (default from configuration)

    Raises:
        NonFiniteValue: f is zero or not finite on the stencil
    """
    h = h or config.derivative_step
    y = _finite(f(L, K), L, K)
    if y == 0:
        raise NonFiniteValue(f"production is zero at L={L}, K={K}")

    dL = h * L
    dK = h * K
    y_L = (_finite(f(L + dL, K), L + dL, K) - _finite(f(L - dL, K), L - dL, K)) / (2 * dL)
    y_K = (_finite(f(L, K + dK), L, K + dK) - _finite(f(L, K - dK), L, K - dK)) / (2 * dK)
    return ShareReport(
        s_L=y_L * L / y, s_K=y_K * K / y, method=ShareMethod.NUMERIC_DERIVATIVE
    )


def analytic_logistic_share(lp: LogisticProduction, L: float, K: float) -> float:
    """Closed-form labor share of the logistic production function.

    alpha N_L / (N_L - L) * C h / (C h + g), with g = L^a K^b and
    h = |N_L - L|^a |N_K - K|^b.

    Raises:
        AtCapacity: L equals the labor capacity
    """
    if L == lp.N_L:
        raise AtCapacity(f"labor is at its capacity N_L={lp.N_L}")
    inputs = L**lp.alpha * K**lp.beta
    gap = lp.C * abs_power(lp.N_L - L, lp.alpha) * abs_power(lp.N_K - K, lp.beta)
    return lp.alpha * (lp.N_L / (lp.N_L - L)) * gap / (gap + inputs)


def logistic_share_trajectory(
    fits: TripleFit, t_grid: Sequence[float], alpha: float | None = None
) -> np.ndarray:
    """Labor share along logistic labor and production flows.

    s(t) = k (N_Y - Y0) e^((b1-b3)t) / (N_L - L0)
           * (L0 + (N_L - L0) e^(-b1 t)) / (Y0 + (N_Y - Y0) e^(-b3 t))

    With alpha None the prefactor k is b3/b1; passing the production
    function's alpha gives the labor share composed with the flows. The two
    agree only when alpha = b3/b1.

    Raises:
        DegenerateFit: fits are not logistic, did not converge, or b1 is zero
    """
    labor, production = fits.labor, fits.production
    if not (isinstance(labor, LogisticFit) and isinstance(production, LogisticFit)):
        raise DegenerateFit("share trajectory needs logistic fits")
    if not (labor.converged and production.converged):
        raise DegenerateFit("share trajectory needs converged fits")
    if labor.b == 0:
        raise DegenerateFit("labor growth rate is zero")

    b1, b3 = labor.b, production.b
    L0, N_L = labor.x0, labor.N
    Y0, N_Y = production.x0, production.N
    k = b3 / b1 if alpha is None else alpha

    t = np.asarray(t_grid, dtype=float)
    numerator = L0 + (N_L - L0) * np.exp(-b1 * t)
    denominator = Y0 + (N_Y - Y0) * np.exp(-b3 * t)
    return k * (N_Y - Y0) * np.exp((b1 - b3) * t) / (N_L - L0) * numerator / denominator


def share_constancy_report(
    f: Surface,
    labor_flow: Flow,
    capital_flow: Flow,
    t_grid: Sequence[float],
    h: float | None = None,
) -> ConstancySummary:
    """How much the numeric labor share of f moves along the given flows.

    Raises:
        EmptySeries: t_grid is empty
    """
    shares = [
        numeric_wage_share(f, labor_flow(t), capital_flow(t), h).s_L for t in t_grid
    ]
    if not shares:
        raise EmptySeries("time grid is empty")

    minimum, maximum = min(shares), max(shares)
    mean = minimum if minimum == maximum else math.fsum(shares) / len(shares)
    spread = maximum - minimum
    if mean != 0:
        relative_range = spread / abs(mean)
    else:
        relative_range = 0.0 if spread == 0 else math.inf

    summary = ConstancySummary(
        mean=mean,
        max_abs_deviation=max(abs(s - mean) for s in shares),
        relative_range=relative_range,
        minimum=minimum,
        maximum=maximum,
        count=len(shares),
    )
    logger.info(
        "Computed labor share constancy",
        extra={"mean": summary.mean, "relative_range": summary.relative_range},
    )
    return summary


def _finite(value: float, L: float, K: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise NonFiniteValue(f"production is not finite at L={L}, K={K}")
    return value
