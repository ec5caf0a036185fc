r"""Armijo backtracking for maximization, on the real line and on the sphere."""

__all__ = ["LineSearchResult", "backtracking_line_search", "line_search", "AdaptiveStep"]

import math
from dataclasses import dataclass

from isacopt.manifold import norm
from isacopt.manifold import retract


@dataclass(frozen=True, eq=False)
class LineSearchResult:
    r"""Outcome of a backtracking search.

    ``accepted`` is ``False`` when the sufficient-increase test never held;
    ``step`` and ``value`` then describe the best trial.  ``point`` is only
    set by the manifold search.

    """

    step: float
    value: float
    backtracks: int
    accepted: bool
    point: object = None


def backtracking_line_search(evaluate, f0, slope, initial_step, params):
    r"""Backtracking search for :math:`\max_s \phi(s)`.

    Accepts the first step with
    :math:`\phi(s) \ge \phi(0) + c_1 s\, \phi'(0)`.

    Parameters
    ----------
    evaluate : callable
        :math:`\phi(s)`.
    f0 : float
        :math:`\phi(0)`.
    slope : float
        :math:`\phi'(0)`, positive for an ascent direction.
    initial_step : float
        First trial step.
    params : LineSearchParams
        Contraction, Armijo constant and backtrack budget.

    Returns
    -------
    A :any:`LineSearchResult`.

    """

    step = initial_step
    best = None

    for backtracks in range(params.max_backtracks + 1):

        value = evaluate(step)
        if best is None or value > best.value:
            best = LineSearchResult(step, value, backtracks, False)

        if value >= f0 + params.sufficient_increase * step * slope:
            return LineSearchResult(step, value, backtracks, True)

        step *= params.contraction

    return LineSearchResult(best.step, best.value, params.max_backtracks, False)


def line_search(w, direction, f_at_w, objective, params, slope, initial_step=None):
    r"""Backtracking along :math:`s \mapsto R_W(sD)` on the power sphere.

    Parameters
    ----------
    w : Precoder
        Current point.
    direction : TangentVector
        Ascent direction :math:`D` at ``w``.
    f_at_w : float
        Objective at ``w`` on the current samples.
    objective : callable
        Objective bound to the same samples as ``f_at_w``.
    params : LineSearchParams
        Backtracking parameters.
    slope : float
        Directional derivative :math:`2\Re\,\mathrm{tr}(G^H D)`.
    initial_step : float, optional
        First trial step; defaults to a displacement of
        ``params.initial_step * sqrt(P)``.

    Returns
    -------
    A :any:`LineSearchResult` whose ``point`` is the retracted iterate.  A
    zero direction gives an unaccepted zero step that stays at ``w``.

    """

    direction_norm = norm(direction)
    if direction_norm == 0.0:
        return LineSearchResult(0.0, f_at_w, 0, False, w)

    if initial_step is None:
        initial_step = params.initial_step * math.sqrt(w.power) / direction_norm

    points = {}

    def evaluate(step):
        points[step] = retract(w, direction, step)
        return objective(points[step])

    result = backtracking_line_search(evaluate, f_at_w, slope, initial_step, params)

    return LineSearchResult(result.step, result.value, result.backtracks, result.accepted, points[result.step])


class AdaptiveStep:
    r"""Initial-step memory of the adaptive line search.

    The next search starts from the last step, multiplied by the growth
    factor if that step was accepted without backtracking.  Zero steps leave the
    memory unchanged.

    """

    def __init__(self, params):

        self.params = params
        self.last_step = None

    def initial_step(self):
        return self.last_step

    def update(self, result):

        if result.step <= 0.0:
            return
        if result.accepted and result.backtracks == 0:
            self.last_step = result.step * self.params.growth
        else:
            self.last_step = result.step
