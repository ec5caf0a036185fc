r"""Optimizer and step-rule configuration."""

__all__ = ["METHODS", "LineSearchParams", "AdaptiveLineSearch", "Diminishing", "Constant", "OptimizerConfig"]

from dataclasses import dataclass
from dataclasses import field

METHODS = ("srgd", "srcg")


@dataclass(frozen=True)
class LineSearchParams:
    r"""Backtracking parameters.

    Parameters
    ----------
    initial_step : float
        First trial step, as a displacement of ``initial_step * sqrt(P)`` in
        the embedding space.
    contraction : float
        Factor applied to the step after every failed trial, in ``(0, 1)``.
    sufficient_increase : float
        Armijo constant :math:`c_1` in ``(0, 1)``.
    max_backtracks : int
        Number of contractions before giving up.
    growth : float
        Factor applied to the last step when it was accepted at the first
        trial.

    """

    initial_step: float = 1.0
    contraction: float = 0.5
    sufficient_increase: float = 1e-4
    max_backtracks: int = 25
    growth: float = 2.0

    def __post_init__(self):

        if not self.initial_step > 0:
            raise ValueError(f"initial_step must be positive, got {self.initial_step}.")
        if not 0 < self.contraction < 1:
            raise ValueError(f"contraction must lie in (0, 1), got {self.contraction}.")
        if not 0 < self.sufficient_increase < 1:
            raise ValueError(f"sufficient_increase must lie in (0, 1), got {self.sufficient_increase}.")
        if int(self.max_backtracks) != self.max_backtracks or self.max_backtracks < 0:
            raise ValueError(f"max_backtracks must be a non-negative integer, got {self.max_backtracks}.")
        if not self.growth >= 1:
            raise ValueError(f"growth must be at least 1, got {self.growth}.")


@dataclass(frozen=True)
class AdaptiveLineSearch:
    r"""Backtracking line search whose initial step adapts between iterations.

    With fresh samples at every iteration, the accepted Armijo step
    :math:`s_t` is damped from iteration ``warmup`` on, and the step taken is
    :math:`\kappa_t s_t` with :math:`\kappa_t = 1 / (1 + t - t_w)`.  As
    :math:`s_t` stays bounded, :math:`\sum\kappa_t s_t = \infty` and
    :math:`\sum\kappa_t^2 s_t^2 < \infty`.

    Parameters
    ----------
    warmup : int
        Iterations taken with undamped steps.
    damping : bool
        Damp the steps at all.

    """

    warmup: int = 20
    damping: bool = True

    kind = "adaptive_linesearch"

    def __post_init__(self):

        if int(self.warmup) != self.warmup or self.warmup < 0:
            raise ValueError(f"warmup must be a non-negative integer, got {self.warmup}.")
        if not isinstance(self.damping, bool):
            raise ValueError(f"damping must be a boolean, got {self.damping!r}.")

    def damping_factor(self, t):
        r"""Factor :math:`\kappa_t` of the accepted step at iteration ``t``."""

        if not self.damping or t < self.warmup:
            return 1.0
        return 1.0 / (1 + t - self.warmup)


@dataclass(frozen=True)
class Diminishing:
    r"""Step sizes :math:`\gamma_t = a / (b + t)`, :math:`t = 1, 2, \ldots`"""

    a: float = 1.0
    b: float = 0.0

    kind = "diminishing"

    def __post_init__(self):

        if not self.a > 0:
            raise ValueError(f"Diminishing schedule needs a > 0, got a = {self.a}.")
        if not self.b >= 0:
            raise ValueError(f"Diminishing schedule needs b >= 0, got b = {self.b}.")

    def step(self, t):
        return self.a / (self.b + t)


@dataclass(frozen=True)
class Constant:
    r"""Fixed step size :math:`\gamma`."""

    gamma: float = 1e-2

    kind = "constant"

    def __post_init__(self):

        if not self.gamma > 0:
            raise ValueError(f"Constant step needs gamma > 0, got {self.gamma}.")

    def step(self, t):
        return self.gamma


@dataclass(frozen=True)
class OptimizerConfig:
    r"""Stochastic Riemannian optimizer settings.

    Parameters
    ----------
    method : str
        ``"srgd"`` (gradient ascent) or ``"srcg"`` (conjugate gradient).
    max_iters : int
        Iteration budget.
    samples_per_iter : int
        Prior samples :math:`N` drawn per iteration.
    step_rule : AdaptiveLineSearch, Diminishing or Constant
        Step-size rule.
    linesearch : LineSearchParams
        Used by :any:`AdaptiveLineSearch`.
    grad_tol : float
        Stop as soon as the Riemannian gradient norm drops below this value.
    seed : int
        Base seed of the per-iteration sample sets.
    fixed_samples : bool
        Draw one sample set up front and reuse it at every iteration.
    record_iterates : bool
        Keep every iterate in the trace.

    """

    method: str = "srgd"
    max_iters: int = 50
    samples_per_iter: int = 10
    step_rule: object = field(default_factory=AdaptiveLineSearch)
    linesearch: LineSearchParams = field(default_factory=LineSearchParams)
    grad_tol: float = 0.0
    seed: int = 0
    fixed_samples: bool = False
    record_iterates: bool = False

    def __post_init__(self):

        method = str(self.method).lower()
        if method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}.")
        object.__setattr__(self, "method", method)

        if int(self.max_iters) != self.max_iters or self.max_iters < 0:
            raise ValueError(f"max_iters must be a non-negative integer, got {self.max_iters}.")
        if int(self.samples_per_iter) != self.samples_per_iter or self.samples_per_iter < 1:
            raise ValueError(f"samples_per_iter must be a positive integer, got {self.samples_per_iter}.")
        if not isinstance(self.step_rule, (AdaptiveLineSearch, Diminishing, Constant)):
            raise ValueError(f"Unknown step rule {self.step_rule!r}.")
        if self.grad_tol < 0:
            raise ValueError(f"grad_tol must be non-negative, got {self.grad_tol}.")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}.")
