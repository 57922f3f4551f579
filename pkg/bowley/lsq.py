"""Least-squares machinery shared by every fitting operation."""

import logging
from collections.abc import Callable, Sequence
from functools import partial

import numpy as np

from .config import config
from .errors import (
    DegenerateDesign,
    LengthMismatch,
    NonFiniteResidual,
    NonFiniteValue,
    SingularNormalMatrix,
)
from .models import LinearFit, NlsOptions, NlsResult, Termination

logger = logging.getLogger(__name__)

ResidualFn = Callable[[np.ndarray], np.ndarray]
JacobianFn = Callable[[np.ndarray], np.ndarray]

# Damping bounds for the Levenberg-Marquardt inner loop
LAMBDA_MIN = 1e-16
LAMBDA_MAX = 1e16

# An accepted step that lowers the cost by less than this fraction ends the fit
COST_RTOL = 1e-14


def linear_fit(ts: Sequence[float], ys: Sequence[float]) -> LinearFit:
    """Ordinary least-squares line through (ts, ys).

    Uses the centered formulation, so large time offsets do not cost precision.

    Raises:
        LengthMismatch: ts and ys differ in length
        DegenerateDesign: fewer than two points or all ts equal
    """
    t = np.asarray(ts, dtype=float)
    y = np.asarray(ys, dtype=float)
    if t.shape != y.shape:
        raise LengthMismatch(f"ts has {t.size} values but ys has {y.size}")
    if t.size < 2:
        raise DegenerateDesign(f"need at least 2 points, got {t.size}")

    dt = t - t.mean()
    sxx = float(dt @ dt)
    if sxx == 0.0:
        raise DegenerateDesign("all time values are identical")

    slope = float(dt @ (y - y.mean())) / sxx
    intercept = float(y.mean()) - slope * float(t.mean())
    residuals = y - (intercept + slope * t)
    return LinearFit(slope=slope, intercept=intercept, rss=float(residuals @ residuals))


def numeric_jacobian(
    fn: Callable[[np.ndarray], np.ndarray], at: Sequence[float], h: float
) -> np.ndarray:
    """Central-difference Jacobian of fn at `at`.

    Coordinate j is perturbed by h * max(1, |at_j|). Returns an (m, n) matrix
    for fn mapping R^n to R^m.

    Raises:
        NonFiniteValue: fn is not finite on the stencil
    """
    x = np.asarray(at, dtype=float)
    columns = []
    for j in range(x.size):
        step = h * max(1.0, abs(float(x[j])))
        forward = x.copy()
        backward = x.copy()
        forward[j] += step
        backward[j] -= step
        f_plus = np.atleast_1d(np.asarray(fn(forward), dtype=float))
        f_minus = np.atleast_1d(np.asarray(fn(backward), dtype=float))
        if not (np.all(np.isfinite(f_plus)) and np.all(np.isfinite(f_minus))):
            raise NonFiniteValue(f"function is not finite near coordinate {j}")
        columns.append((f_plus - f_minus) / (2.0 * step))
    return np.column_stack(columns)


def nls_fit(
    residual_fn: ResidualFn,
    init: Sequence[float],
    jacobian: JacobianFn | None = None,
    opts: NlsOptions | None = None,
) -> NlsResult:
    """Minimize ||residual_fn(p)||^2 with Levenberg-Marquardt.

    Each iteration first tries the undamped Gauss-Newton step and keeps it if
    the cost does not increase. Otherwise it takes Marquardt-scaled damped
    steps, multiplying the damping by 10 on rejection and dividing by 10 on
    acceptance. An accepted step that leaves the cost unchanged to within
    COST_RTOL ends the fit with STEP_SMALL.

    Args:
        residual_fn: Maps a parameter vector to the residual vector
        init: Starting parameters
        jacobian: Residual Jacobian; central differences when omitted
        opts: Termination and damping settings

    Returns:
        NlsResult with the final parameters and the accepted rss history

    Raises:
        NonFiniteValue: init is not finite
        NonFiniteResidual: residuals are NaN/Inf and damping cannot avoid it
        SingularNormalMatrix: the damped normal matrix stays singular
    """
    opts = opts or NlsOptions()
    p = np.asarray(init, dtype=float).copy()
    if not np.all(np.isfinite(p)):
        raise NonFiniteValue("initial parameters must be finite")

    if jacobian is None:
        jacobian = partial(numeric_jacobian, residual_fn, h=config.derivative_step)

    r = _residuals(residual_fn, p)
    if r is None:
        raise NonFiniteResidual("residuals are not finite at the initial parameters")

    cost = float(r @ r)
    history = [cost]
    lam = opts.initial_damping
    iterations = 0
    termination = Termination.MAX_ITERATIONS

    while iterations < opts.max_iterations:
        J = np.atleast_2d(np.asarray(jacobian(p), dtype=float))
        iterations += 1
        if not np.all(np.isfinite(J)):
            raise NonFiniteResidual(f"Jacobian is not finite at {p.tolist()}")

        g = J.T @ r
        if float(np.max(np.abs(g))) <= opts.gradient_tolerance:
            termination = Termination.GRADIENT_SMALL
            break

        delta = _gauss_newton_step(J, r)
        trial = _try_step(residual_fn, p, delta, cost)
        if trial is not None:
            lam = max(lam / 10.0, LAMBDA_MIN)
        else:
            trial, lam = _damped_step(residual_fn, p, J, g, cost, lam)
            if trial is None:
                termination = Termination.STEP_SMALL
                break

        previous = cost
        delta, p, r, cost = trial
        history.append(cost)
        logger.debug(
            "Accepted step",
            extra={"iteration": iterations, "rss": cost, "damping": lam},
        )

        if float(np.linalg.norm(delta)) <= opts.step_tolerance * (
            float(np.linalg.norm(p)) + opts.step_tolerance
        ):
            termination = Termination.STEP_SMALL
            break

        if previous - cost <= COST_RTOL * previous:
            termination = Termination.STEP_SMALL
            break

    converged = termination is not Termination.MAX_ITERATIONS
    if not converged:
        logger.warning(
            f"Nonlinear fit stopped after {iterations} iterations without converging",
            extra={"iterations": iterations, "rss": cost},
        )
    return NlsResult(
        parameters=tuple(float(v) for v in p),
        rss=cost,
        iterations=iterations,
        converged=converged,
        termination=termination,
        rss_history=tuple(history),
    )


_Trial = tuple[np.ndarray, np.ndarray, np.ndarray, float]


def _residuals(residual_fn: ResidualFn, p: np.ndarray) -> np.ndarray | None:
    """Evaluate residuals, returning None when any entry is NaN/Inf."""
    with np.errstate(all="ignore"):
        r = np.atleast_1d(np.asarray(residual_fn(p), dtype=float))
    return r if np.all(np.isfinite(r)) else None


def _gauss_newton_step(J: np.ndarray, r: np.ndarray) -> np.ndarray:
    delta, *_ = np.linalg.lstsq(J, -r, rcond=None)
    return np.asarray(delta, dtype=float)


def _try_step(
    residual_fn: ResidualFn, p: np.ndarray, delta: np.ndarray, cost: float
) -> _Trial | None:
    """Accept p + delta when it is finite and does not raise the cost."""
    if not np.all(np.isfinite(delta)):
        return None
    candidate = p + delta
    r = _residuals(residual_fn, candidate)
    if r is None:
        return None
    new_cost = float(r @ r)
    if new_cost > cost:
        return None
    return delta, candidate, r, new_cost


def _damped_step(
    residual_fn: ResidualFn,
    p: np.ndarray,
    J: np.ndarray,
    g: np.ndarray,
    cost: float,
    lam: float,
) -> tuple[_Trial | None, float]:
    """Raise the damping until a step lowers the cost or the damping saturates."""
    H = J.T @ J
    scale = np.diag(H).copy()
    scale[scale <= 0.0] = 1.0

    saw_finite = False
    saw_solvable = False
    while lam <= LAMBDA_MAX:
        try:
            factor = np.linalg.cholesky(H + lam * np.diag(scale))
        except np.linalg.LinAlgError:
            lam *= 10.0
            continue
        saw_solvable = True
        delta = np.linalg.solve(factor.T, np.linalg.solve(factor, -g))

        candidate = p + delta
        r = _residuals(residual_fn, candidate)
        if r is None:
            lam *= 10.0
            continue
        saw_finite = True

        new_cost = float(r @ r)
        if new_cost <= cost:
            return (delta, candidate, r, new_cost), max(lam / 10.0, LAMBDA_MIN)
        lam *= 10.0

    if not saw_solvable:
        raise SingularNormalMatrix("normal matrix is singular at maximal damping")
    if not saw_finite:
        raise NonFiniteResidual(
            f"residuals stay non-finite near {p.tolist()} at every damping level"
        )
    return None, lam
