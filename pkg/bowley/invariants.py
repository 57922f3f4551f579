"""
Invariant algebra for growth flows.

Covers the orthogonality condition between exponents and growth rates, the
elasticities it implies, the returns-to-scale classification, and the
Cobb-Douglas and logistic production functions that arise as invariants of
exponential and logistic flows. The coordinate map psi sends exponential flows
to logistic ones.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from .config import config
from .errors import (
    LengthMismatch,
    NonPositiveInput,
    NonPositiveRate,
    OutOfRange,
    ZeroDivisor,
    ZeroExponent,
)
from .models import (
    CobbDouglas,
    ElasticitySolution,
    LogisticFit,
    LogisticProduction,
    ReturnsClass,
    SShaped,
)

logger = logging.getLogger(__name__)

Vector = Sequence[float]

# Pushforward cross-check tolerance, relative to the field scale
FIELD_TOLERANCE = 1e-12


def orthogonality_residual(a: Vector, b: Vector) -> float:
    """Dot product sum(a_i b_i); zero exactly when the invariant is flow-invariant."""
    av, bv = _paired(a, b)
    return math.fsum(av * bv)


def crs_elasticities(
    b: Vector, tie_tolerance: float | None = None
) -> ElasticitySolution:
    """Solve alpha b1 + beta b2 = b3 together with alpha + beta = 1.

    Ties are judged relative to max|b_i|. When b1 and b2 tie the system has no
    unique solution and both elasticities are None. Otherwise the formula
    values are returned for every classification, even if not both positive.
    """
    b1, b2, b3 = _triple(b)
    tol = (tie_tolerance or config.tie_tolerance) * max(abs(b1), abs(b2), abs(b3))

    if abs(b1 - b2) <= tol:
        logger.debug("Labor and capital rates tie", extra={"b1": b1, "b2": b2})
        return ElasticitySolution(classification=ReturnsClass.DEGENERATE)

    alpha = (b3 - b2) / (b1 - b2)
    beta = (b3 - b1) / (b2 - b1)
    lo, hi = min(b1, b2), max(b1, b2)

    if abs(b3 - lo) <= tol or abs(b3 - hi) <= tol:
        classification = ReturnsClass.DEGENERATE
    elif lo < b3 < hi:
        classification = ReturnsClass.CRS_ATTAINABLE
    elif b3 > hi:
        classification = ReturnsClass.INCREASING_ONLY
    else:
        classification = ReturnsClass.DECREASING_ONLY

    return ElasticitySolution(alpha=alpha, beta=beta, classification=classification)


def beta_given_alpha(b: Vector, alpha: float) -> float:
    """The beta on the orthogonality line for a fixed alpha: (b3 - alpha b1) / b2."""
    b1, b2, b3 = _triple(b)
    if b2 == 0:
        raise ZeroDivisor("capital growth rate b2 is zero")
    return (b3 - alpha * b1) / b2


def classify_returns(b: Vector) -> ReturnsClass:
    """Where the production rate sits relative to the labor and capital rates.

    Raises:
        NonPositiveRate: Any rate is zero or negative
    """
    rates = _triple(b)
    if min(rates) <= 0:
        raise NonPositiveRate(f"growth rates must be positive, got {list(rates)}")
    return crs_elasticities(rates).classification


def eval_cobb_douglas(cd: CobbDouglas, L: float, K: float) -> float:
    """A L^alpha K^beta."""
    _require_positive(L=L, K=K)
    return cd.A * L**cd.alpha * K**cd.beta


def general_invariant_value(x0: Vector, a: Vector, x: Vector) -> float:
    """prod (x0_i)^a_i * prod (x_i)^a_i, evaluated in log space."""
    x0v, av = _paired(x0, a)
    _, xv = _paired(a, x)
    if np.any(x0v <= 0) or np.any(xv <= 0):
        raise NonPositiveInput("invariant arguments must be positive")
    return math.exp(math.fsum(av * (np.log(x0v) + np.log(xv))))


def induced_cobb_douglas(x0: Vector, a: Vector, C: float) -> CobbDouglas:
    """The Cobb-Douglas surface on the level set general_invariant_value = C.

    With three factors (labor, capital, production) the level set solved for
    production gives alpha = -a1/a3, beta = -a2/a3 and a matching scale A.

    Raises:
        ZeroExponent: a3 is zero
        NonPositiveInput: C or an initial level is not positive
    """
    x0v, av = _paired(x0, a)
    if av.size != 3:
        raise LengthMismatch(f"expected 3 exponents, got {av.size}")
    a1, a2, a3 = (float(v) for v in av)
    if a3 == 0:
        raise ZeroExponent("production exponent a3 is zero")
    if C <= 0 or np.any(x0v <= 0):
        raise NonPositiveInput("invariant level and initial levels must be positive")

    l0, k0, y0 = (float(v) for v in x0v)
    log_A = (math.log(C) - a1 * math.log(l0) - a2 * math.log(k0)) / a3 - math.log(y0)
    return CobbDouglas(A=math.exp(log_A), alpha=-a1 / a3, beta=-a2 / a3)


def solve_production_from_invariant(
    x0: Vector, a: Vector, C: float, x1: float, x2: float
) -> float:
    """Production level x3 at which the general invariant equals C."""
    return eval_cobb_douglas(induced_cobb_douglas(x0, a, C), x1, x2)


def logistic_invariant_value(x0: Vector, N: Vector, a: Vector, x: Vector) -> float:
    """prod [x_i (N_i - x0_i) / (x0_i (N_i - x_i))]^a_i.

    Raises:
        OutOfRange: Some x_i or x0_i is not below its capacity
    """
    x0v, Nv = _paired(x0, N)
    _, av = _paired(x0, a)
    _, xv = _paired(x0, x)
    if np.any(x0v <= 0) or np.any(xv <= 0):
        raise NonPositiveInput("logistic invariant arguments must be positive")
    if np.any(xv >= Nv) or np.any(x0v >= Nv):
        raise OutOfRange("logistic invariant needs every level below its capacity")
    brackets = np.log(xv) + np.log(Nv - x0v) - np.log(x0v) - np.log(Nv - xv)
    return math.exp(math.fsum(av * brackets))


def eval_logistic_production(lp: LogisticProduction, L: float, K: float) -> float:
    """N_Y L^a K^b / (C |N_L - L|^a |N_K - K|^b + L^a K^b), always in (0, N_Y)."""
    _require_positive(L=L, K=K)
    inputs = L**lp.alpha * K**lp.beta
    gap = abs_power(lp.N_L - L, lp.alpha) * abs_power(lp.N_K - K, lp.beta)
    return lp.N_Y * inputs / (lp.C * gap + inputs)


def eval_kuznets(N_x: float, N_f: float, C: float, alpha: float, x: float) -> float:
    """One-input logistic production curve N_f x^a / (C |N_x - x|^a + x^a)."""
    _require_positive(x=x)
    inputs = x**alpha
    return N_f * inputs / (C * abs_power(N_x - x, alpha) + inputs)


def logistic_production_from_cobb_douglas(
    cd: CobbDouglas, N_L: float, N_K: float, N_Y: float
) -> LogisticProduction:
    """Logistic production function that tends to `cd` as the capacities grow."""
    C = N_Y * N_L ** (-cd.alpha) * N_K ** (-cd.beta) / cd.A
    return LogisticProduction(
        N_L=N_L, N_K=N_K, N_Y=N_Y, C=C, alpha=cd.alpha, beta=cd.beta
    )


def calibrate_logistic_production(
    labor: LogisticFit,
    capital: LogisticFit,
    production: LogisticFit,
    alpha: float,
    beta: float,
) -> LogisticProduction:
    """Logistic production function passing through the flows' initial point.

    When alpha b1 + beta b2 = b3 it then reproduces the production flow at
    every t.
    """
    C = (
        (production.N - production.x0)
        / production.x0
        * (labor.x0 / (labor.N - labor.x0)) ** alpha
        * (capital.x0 / (capital.N - capital.x0)) ** beta
    )
    return LogisticProduction(
        N_L=labor.N, N_K=capital.N, N_Y=production.N, C=C, alpha=alpha, beta=beta
    )


def b_coefficient(lp: LogisticProduction) -> float:
    """Scale B = N_Y N_L^-alpha N_K^-beta / C of the pushforward construction."""
    return lp.N_Y * lp.N_L ** (-lp.alpha) * lp.N_K ** (-lp.beta) / lp.C


def psi_forward(N: Vector, x: Vector) -> np.ndarray:
    """x~_i = N_i x_i / (N_i + x_i)."""
    Nv, xv = _paired(N, x)
    if np.any(Nv <= 0) or np.any(xv <= 0):
        raise NonPositiveInput("psi needs positive capacities and coordinates")
    return Nv * xv / (Nv + xv)


def psi_inverse(N: Vector, x_tilde: Vector) -> np.ndarray:
    """x_i = N_i x~_i / (N_i - x~_i).

    Raises:
        OutOfRange: Some x~_i is outside (0, N_i)
    """
    Nv, xt = _paired(N, x_tilde)
    if np.any(xt <= 0) or np.any(xt >= Nv):
        raise OutOfRange("psi inverse needs 0 < x~_i < N_i")
    return Nv * xt / (Nv - xt)


def psi_jacobian(N: Vector, x: Vector) -> np.ndarray:
    """Diagonal of the psi Jacobian, N_i^2 / (N_i + x_i)^2."""
    Nv, xv = _paired(N, x)
    if np.any(Nv <= 0) or np.any(xv <= 0):
        raise NonPositiveInput("psi needs positive capacities and coordinates")
    return Nv**2 / (Nv + xv) ** 2


def logistic_field(b: Vector, N: Vector, x_tilde: Vector) -> np.ndarray:
    """Closed-form logistic vector field b_i x~_i (1 - x~_i / N_i)."""
    bv, Nv = _paired(b, N)
    _, xt = _paired(b, x_tilde)
    if np.any(xt <= 0) or np.any(xt >= Nv):
        raise OutOfRange("logistic field needs 0 < x~_i < N_i")
    return bv * xt * (1.0 - xt / Nv)


def pushforward_field(b: Vector, N: Vector, x_tilde: Vector) -> np.ndarray:
    """Push the exponential field b_i x_i through psi by the chain rule.

    The result is compared against logistic_field and a warning is logged if
    the two routes disagree.
    """
    bv, Nv = _paired(b, N)
    x = psi_inverse(Nv, x_tilde)
    chained = psi_jacobian(Nv, x) * (bv * x)

    closed = logistic_field(bv, Nv, x_tilde)
    scale = max(1.0, float(np.max(np.abs(closed))))
    gap = float(np.max(np.abs(chained - closed)))
    if gap > FIELD_TOLERANCE * scale:
        logger.warning(
            "Pushforward field disagrees with the logistic closed form",
            extra={"gap": gap, "scale": scale},
        )
    return chained


def eval_s_shaped(s: SShaped, K: float, L: float) -> float:
    """a K^p L^(1-p) / (1 + b K^p L^-p)."""
    _require_positive(K=K, L=L)
    return s.a * L ** (1.0 - s.p) * K**s.p / (1.0 + s.b * K**s.p * L ** (-s.p))


def _triple(b: Vector) -> tuple[float, float, float]:
    values = tuple(float(v) for v in b)
    if len(values) != 3:
        raise LengthMismatch(f"expected 3 growth rates, got {len(values)}")
    return values[0], values[1], values[2]


def _paired(u: Vector, v: Vector) -> tuple[np.ndarray, np.ndarray]:
    uv = np.asarray(u, dtype=float)
    vv = np.asarray(v, dtype=float)
    if uv.shape != vv.shape:
        raise LengthMismatch(f"vectors have lengths {uv.size} and {vv.size}")
    return uv, vv


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise NonPositiveInput(f"{name} must be positive, got {value}")


def abs_power(base: float, exponent: float) -> float:
    """|base|^exponent, infinite for a zero base with negative exponent."""
    magnitude = abs(base)
    if magnitude == 0.0:
        return math.inf if exponent < 0 else (1.0 if exponent == 0 else 0.0)
    return magnitude**exponent
