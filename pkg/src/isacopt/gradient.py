r"""Euclidean gradient of the stochastic objective and its finite-difference oracle.

Gradients follow the Wirtinger convention :math:`G = \partial f / \partial \bar W`
for real-valued :math:`f`, so that
:math:`f(W + \Delta) = f(W) + 2\Re\,\mathrm{tr}(G^H \Delta) + o(\|\Delta\|)`
and :math:`G` is an ascent direction.
"""

__all__ = ["GradientReport", "euclidean_gradient", "fd_gradient", "gradient_report", "relative_error"]

from dataclasses import dataclass

import torch

from isacopt.bfim import SampledObjective
from isacopt.manifold import as_matrix
from isacopt.utilities.slicing import range_index

DEFAULT_FD_STEP = 1e-6

# Floor of the denominator of relative errors.
REL_ERROR_EPS = 1e-30


@dataclass(frozen=True, eq=False)
class GradientReport:

    analytic: torch.Tensor
    fd: torch.Tensor
    rel_error: float


def relative_error(analytic, reference):

    diff = torch.linalg.norm(analytic - reference).item()
    return diff / max(torch.linalg.norm(reference).item(), REL_ERROR_EPS)


def _objective_function(ss, oc):

    if oc is None:
        if not callable(ss):
            raise TypeError("Either a callable or a sample set with an objective configuration is required.")
        return ss
    if isinstance(ss, SampledObjective):
        return ss.value
    return SampledObjective(oc, ss).value


def euclidean_gradient(w, ss, oc):
    r"""Analytic :math:`\partial \hat f(W;\alpha) / \partial \bar W` on the sample set ``ss``."""

    return SampledObjective(oc, ss).gradient(w)


def fd_gradient(w, ss, oc=None, h=DEFAULT_FD_STEP):
    r"""Central finite-difference gradient in the Wirtinger convention.

    Every entry is perturbed along its real and imaginary axes, and
    :math:`G_{pq} = \frac{1}{2}(\partial f/\partial \Re W_{pq} + j\,\partial f/\partial \Im W_{pq})`.

    Parameters
    ----------
    w : Precoder or torch.Tensor
        Evaluation point.
    ss : SampleSet or callable
        Sample set (common random numbers for all evaluations), or any
        real-valued function of a complex matrix when ``oc`` is ``None``.
    oc : ObjectiveConfig, optional
        Objective configuration.
    h : float
        Difference step.

    Returns
    -------
    Complex tensor with the shape of ``w``.

    """

    if not h > 0:
        raise ValueError(f"Finite-difference step must be positive, got {h}.")

    f = _objective_function(ss, oc)
    W = as_matrix(w).clone()
    G = torch.zeros_like(W)

    for p, q in range_index(W.shape):
        partials = []
        for direction in (1.0, 1.0j):
            E = torch.zeros_like(W)
            E[p, q] = h * direction
            partials.append((f(W + E) - f(W - E)) / (2.0 * h))
        G[p, q] = 0.5 * complex(partials[0], partials[1])

    return G


def gradient_report(w, ss, oc, h=DEFAULT_FD_STEP, perturbation=0.0):
    r"""Compares the analytic gradient with :func:`fd_gradient`.

    Parameters
    ----------
    perturbation : float, optional
        Offset added to every entry of the analytic gradient.  Non-zero
        values only serve as a negative control of the check itself.

    """

    objective = SampledObjective(oc, ss)

    analytic = objective.gradient(w)
    if perturbation != 0.0:
        analytic = analytic + perturbation

    fd = fd_gradient(w, objective, oc, h=h)

    return GradientReport(analytic, fd, relative_error(analytic, fd))
