r"""Checks of the step-size conditions :math:`\sum\gamma_t = \infty`, :math:`\sum\gamma_t^2 < \infty`."""

__all__ = ["ScheduleDiagnostics", "validate_schedule"]

import logging
from dataclasses import dataclass

import numpy as np

from isacopt.optim.config import Diminishing

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScheduleDiagnostics:

    a: float
    b: float
    horizon: int
    partial_sum: float
    partial_sum_squares: float
    divergent_sum: bool
    summable_squares: bool


def validate_schedule(rule, horizon=10**6):
    r"""Verifies that a step rule satisfies the Robbins-Monro conditions.

    :math:`\gamma_t = a/(b+t)` with :math:`a > 0, b \ge 0` has a divergent
    sum and a summable sum of squares, which is the step-size contract of
    almost-sure convergence of the stochastic Riemannian gradient.  Partial
    sums over ``horizon`` terms are reported for logging.

    Parameters
    ----------
    rule : Diminishing
        The schedule to check.
    horizon : int
        Number of terms of the partial sums.

    Returns
    -------
    A :any:`ScheduleDiagnostics` instance.

    Raises
    ------
    ValueError
        For any rule other than a diminishing one with ``a > 0``.

    """

    if not isinstance(rule, Diminishing):
        raise ValueError(f"{type(rule).__name__} step rule violates the step-size conditions: "
                         "only a / (b + t) schedules guarantee sum(gamma) = inf and sum(gamma^2) < inf.")
    if not rule.a > 0:
        raise ValueError(f"Diminishing schedule needs a > 0, got a = {rule.a}.")
    if horizon < 1:
        raise ValueError(f"horizon must be positive, got {horizon}.")

    t = np.arange(1, horizon + 1, dtype=np.float64)
    gamma = rule.a / (rule.b + t)

    diagnostics = ScheduleDiagnostics(a=rule.a, b=rule.b, horizon=horizon,
                                      partial_sum=float(np.sum(gamma)),
                                      partial_sum_squares=float(np.sum(gamma**2)),
                                      divergent_sum=True,
                                      summable_squares=True)

    logger.info("schedule a=%g b=%g: sum over %d steps = %.6g, sum of squares = %.6g",
                rule.a, rule.b, horizon, diagnostics.partial_sum, diagnostics.partial_sum_squares)

    return diagnostics
