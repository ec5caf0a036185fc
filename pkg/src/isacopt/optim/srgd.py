r"""Stochastic Riemannian gradient (SRGD) and conjugate-gradient (SRCG) ascent.

Each iteration draws a fresh set of prior samples, evaluates the sampled
objective and its Riemannian gradient on it, picks a step, and retracts.
Objective, gradient and line search of one iteration share the same
samples.

With fresh samples the adaptive line-search steps are damped after a warm-up,
so the steps taken keep a divergent sum with a summable sum of squares.
"""

__all__ = ["OptimizationError", "run", "srcg_direction"]

import logging
import time

from isacopt.bfim import SampledObjective
from isacopt.manifold import TangentVector
from isacopt.manifold import inner
from isacopt.manifold import retract
from isacopt.manifold import riemannian_gradient
from isacopt.manifold import transport
from isacopt.optim.config import AdaptiveLineSearch
from isacopt.optim.config import Diminishing
from isacopt.optim.linesearch import AdaptiveStep
from isacopt.optim.linesearch import LineSearchResult
from isacopt.optim.linesearch import line_search
from isacopt.optim.schedule import validate_schedule
from isacopt.optim.trace import IterationRecord
from isacopt.optim.trace import IterationTrace
from isacopt.sampler import sample_from_prior
from isacopt.utilities import seeding

logger = logging.getLogger(__name__)


class OptimizationError(RuntimeError):
    r"""An objective evaluation failed during a run.

    Attributes
    ----------
    trace : IterationTrace
        Records of the iterations completed before the failure.
    iteration : int
        Index of the failing iteration.

    """

    def __init__(self, message, trace, iteration):

        super(OptimizationError, self).__init__(message)
        self.trace = trace
        self.iteration = iteration


def srcg_direction(prev_dir, grad_now, w_prev, w_now, prev_grad=None):
    r"""Polak-Ribière conjugate direction on the sphere.

    .. math::
        D_t = g_t + \beta_t\, \mathcal{T}(D_{t-1}), \quad
        \beta_t = \max\left(0, \frac{\langle g_t, g_t - \mathcal{T}(g_{t-1})\rangle}{\langle g_{t-1}, g_{t-1}\rangle}\right)

    with projection transport :math:`\mathcal{T}`.  Falls back to
    :math:`g_t` when there is no previous direction or when :math:`D_t` is
    not an ascent direction.

    Parameters
    ----------
    prev_dir : TangentVector or None
        Previous search direction, tangent at ``w_prev``.
    grad_now : TangentVector
        Riemannian gradient at ``w_now``.
    w_prev : Precoder
        Previous iterate.
    w_now : Precoder
        Current iterate.
    prev_grad : TangentVector, optional
        Previous Riemannian gradient; ``prev_dir`` stands in for it when
        omitted.

    Returns
    -------
    A :any:`TangentVector` at ``w_now``.

    """

    if prev_dir is None:
        return grad_now
    if prev_grad is None:
        prev_grad = prev_dir

    denominator = inner(prev_grad, prev_grad)
    if denominator == 0.0:
        return grad_now

    g_prev = transport(w_prev, w_now, prev_grad)
    d_prev = transport(w_prev, w_now, prev_dir)

    beta = max(0.0, inner(grad_now, grad_now.mat - g_prev.mat) / denominator)
    direction = TangentVector(grad_now.mat + beta * d_prev.mat, grad_now.base)

    if inner(direction, grad_now) <= 0.0:
        return grad_now
    return direction


def _draw_samples(oc, opt, t):

    if opt.fixed_samples:
        seed = seeding.derive_seed(opt.seed, seeding.FIXED_SAMPLES)
    else:
        seed = seeding.derive_seed(opt.seed, seeding.ITERATION, t)
    return sample_from_prior(oc.prior, opt.samples_per_iter, seed)


def _damp(w, direction, f, objective, params, slope, result, kappa):

    # Sufficient increase is checked again at the damped step
    damped = line_search(w, direction, f, objective, params, slope, kappa * result.step)
    return LineSearchResult(damped.step, damped.value, result.backtracks + damped.backtracks, damped.accepted, damped.point)


def run(oc, opt, init):
    r"""Maximizes :math:`\hat f(W;\alpha)` over the power sphere.

    Parameters
    ----------
    oc : ObjectiveConfig
        Objective configuration, including the prior the samples are drawn
        from.
    opt : OptimizerConfig
        Optimizer settings.
    init : Precoder
        Starting point on the sphere.

    Returns
    -------
    The final :any:`Precoder` and the :any:`IterationTrace`.

    Raises
    ------
    OptimizationError
        If the objective cannot be evaluated; the partial trace is attached.

    """

    if not init.on_manifold:
        raise ValueError(f"Initial point is off the power sphere (relative residual {init.feasibility_residual:.3g}).")

    trace = IterationTrace()
    objective = SampledObjective(oc)
    adaptive = AdaptiveStep(opt.linesearch)
    use_linesearch = isinstance(opt.step_rule, AdaptiveLineSearch)
    damped = use_linesearch and opt.step_rule.damping and not opt.fixed_samples

    if isinstance(opt.step_rule, Diminishing):
        validate_schedule(opt.step_rule, horizon=max(opt.max_iters, 1))
    elif damped:
        logger.info("line-search steps damped by 1 / (1 + t - %d) from iteration %d on",
                    opt.step_rule.warmup, opt.step_rule.warmup)

    w = init
    w_prev = prev_dir = prev_grad = None
    fixed = _draw_samples(oc, opt, 0) if opt.fixed_samples else None

    for t in range(opt.max_iters):

        start = time.perf_counter()
        samples = fixed if fixed is not None else _draw_samples(oc, opt, t)

        try:
            objective.bind(samples)
            f = objective.value(w)
            rgrad = riemannian_gradient(w, objective.gradient(w))
            grad_norm = rgrad.norm()

            if grad_norm < opt.grad_tol:
                ms = 1e3 * (time.perf_counter() - start)
                trace.append(IterationRecord(t, f, grad_norm, 0.0, 0, True, samples.seed, ms),
                             w if opt.record_iterates else None)
                trace.converged = True
                break

            if opt.method == "srcg":
                direction = srcg_direction(prev_dir, rgrad, w_prev, w, prev_grad)
            else:
                direction = rgrad
            slope = 2.0 * inner(rgrad, direction)

            if use_linesearch:
                result = line_search(w, direction, f, objective, opt.linesearch, slope, adaptive.initial_step())
                adaptive.update(result)
                kappa = opt.step_rule.damping_factor(t) if damped else 1.0
                if kappa < 1.0 and result.accepted:
                    result = _damp(w, direction, f, objective, opt.linesearch, slope, result, kappa)
            else:
                step = opt.step_rule.step(t + 1)
                w_trial = retract(w, direction, step)
                result = LineSearchResult(step, objective.value(w_trial), 0, True, w_trial)

        except (ValueError, RuntimeError) as e:
            raise OptimizationError(f"Objective evaluation failed at iteration {t}: {e}", trace, t) from e

        ms = 1e3 * (time.perf_counter() - start)
        trace.append(IterationRecord(t, f, grad_norm, result.step, result.backtracks, result.accepted, samples.seed, ms),
                     w if opt.record_iterates else None)

        logger.debug("iter %d: f = %.6g, |grad| = %.3g, step = %.3g, backtracks = %d",
                     t, f, grad_norm, result.step, result.backtracks)

        # Restart the conjugate directions after a failed search
        if result.accepted:
            w_prev, prev_dir, prev_grad = w, direction, rgrad
        else:
            w_prev = prev_dir = prev_grad = None
        w = result.point

    if opt.record_iterates and not trace.converged:
        trace.iterates.append(w)

    if len(trace):
        logger.info("%s finished after %d iterations: f = %.6g, |grad| = %.3g",
                    opt.method, len(trace), trace[-1].objective, trace[-1].grad_norm)

    return w, trace
