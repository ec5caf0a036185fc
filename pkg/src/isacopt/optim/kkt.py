r"""First-order optimality diagnostics on the power sphere.

At a critical point :math:`\nabla f = 2\lambda W` with
:math:`\lambda = \Re\,\mathrm{tr}(W^H \nabla f) / (2P)`, so the stationarity
residual is the norm of the projected gradient relative to the gradient.
"""

__all__ = ["KKTReport", "kkt_report"]

from dataclasses import dataclass

import torch

from isacopt.bfim import SampledObjective
from isacopt.manifold import inner
from isacopt.sampler import sample_from_prior
from isacopt.utilities import seeding

# Floor of the denominator of the stationarity residual.
RESIDUAL_EPS = 1e-30


@dataclass(frozen=True)
class KKTReport:

    multiplier: float
    stationarity_residual: float
    feasibility_residual: float
    grad_norm: float

    @property
    def lambda_(self):
        return self.multiplier


def kkt_report(w, oc, eval_sample_count=1000, seed=0, samples=None):
    r"""Evaluates the Lagrange multiplier and the KKT residuals at ``w``.

    Parameters
    ----------
    w : Precoder
        Point on the sphere.
    oc : ObjectiveConfig
        Objective configuration.
    eval_sample_count : int
        Size of the fixed-seed evaluation sample set.
    seed : int
        Base seed of the evaluation sample set.
    samples : SampleSet, optional
        Evaluate on these samples instead, for instance the fixed sample set
        of a run.

    Returns
    -------
    A :any:`KKTReport`.

    """

    if samples is None:
        samples = sample_from_prior(oc.prior, eval_sample_count, seeding.derive_seed(seed, seeding.EVALUATION))
    G = SampledObjective(oc, samples).gradient(w)

    multiplier = inner(w.mat, G) / (2.0 * w.power)
    grad_norm = torch.linalg.norm(G).item()
    residual = torch.linalg.norm(G - 2.0 * multiplier * w.mat).item() / max(grad_norm, RESIDUAL_EPS)

    return KKTReport(multiplier, residual, w.feasibility_residual, grad_norm)
