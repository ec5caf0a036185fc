r"""The complex power sphere :math:`\{W : \mathrm{tr}(WW^H) = P\}`.

Points are :any:`Precoder` instances and tangent vectors carry a reference
to the point they are tangent at.  The metric is the real Frobenius inner
product :math:`\langle U, V \rangle = \Re\,\mathrm{tr}(U^H V)`.
"""

__all__ = ["Precoder", "TangentVector",
           "as_matrix", "inner", "norm",
           "project_tangent", "riemannian_gradient", "retract", "transport",
           "random_point", "tangency_residual"]

import math
from dataclasses import dataclass

import torch

from isacopt.utilities import linalg
from isacopt.utilities.seeding import as_rng
from isacopt.utilities.seeding import complex_normal

# Relative tolerance of the power constraint.
FEASIBILITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Precoder:
    r"""A linear precoder :math:`W \in \mathbb{C}^{N_t \times N_s}`.

    Parameters
    ----------
    mat : torch.Tensor
        Complex matrix.
    power : float
        Power budget :math:`P` of the sphere the precoder belongs to.

    """

    mat: torch.Tensor
    power: float = 1.0

    def __post_init__(self):

        mat = torch.as_tensor(self.mat, dtype=torch.complex128)
        if mat.dim() != 2:
            raise ValueError(f"A precoder is a matrix, got shape {tuple(mat.shape)}.")
        if not self.power > 0:
            raise ValueError(f"power must be strictly positive, got {self.power}.")

        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "power", float(self.power))

    @property
    def shape(self):
        return tuple(self.mat.shape)

    @property
    def trace_power(self):
        return torch.sum(torch.abs(self.mat)**2).item()

    @property
    def feasibility_residual(self):
        return abs(self.trace_power - self.power) / self.power

    @property
    def on_manifold(self):
        return self.feasibility_residual <= FEASIBILITY_TOL


@dataclass(frozen=True, eq=False)
class TangentVector:
    r"""A tangent vector :math:`V` at the point ``base``."""

    mat: torch.Tensor
    base: Precoder

    def __add__(self, other):
        if other.base is not self.base:
            raise ValueError("Tangent vectors at different points cannot be added; transport one first.")
        return TangentVector(self.mat + other.mat, self.base)

    def __mul__(self, scalar):
        return TangentVector(scalar * self.mat, self.base)

    __rmul__ = __mul__

    def __neg__(self):
        return TangentVector(-self.mat, self.base)

    def norm(self):
        return norm(self)


def as_matrix(x):
    r"""The underlying complex matrix of a precoder, tangent vector or tensor."""

    if isinstance(x, (Precoder, TangentVector)):
        return x.mat
    return torch.as_tensor(x, dtype=torch.complex128)


def inner(u, v):

    return linalg.inner(as_matrix(u), as_matrix(v))


def norm(v):

    return torch.linalg.norm(as_matrix(v)).item()


def tangency_residual(v):
    r"""Normalized radial component :math:`|\Re\,\mathrm{tr}(W^H V)| / (\|W\|\|V\|)`."""

    W = v.base.mat
    denominator = torch.linalg.norm(W).item() * norm(v)
    if denominator == 0:
        return 0.0
    return abs(inner(W, v.mat)) / denominator


def project_tangent(w, v):
    r"""Orthogonal projection onto the tangent space at ``w``.

    .. math::
        \mathrm{Proj}_W(V) = V - \frac{\Re\,\mathrm{tr}(W^H V)}{P} W

    Parameters
    ----------
    w : Precoder
        Point on the sphere.
    v : torch.Tensor or TangentVector
        Ambient matrix to project.

    Returns
    -------
    A :any:`TangentVector` at ``w``.

    """

    V = as_matrix(v)
    W = w.mat
    return TangentVector(V - (inner(W, V) / w.power) * W, w)


def riemannian_gradient(w, egrad):

    return project_tangent(w, egrad)


def retract(w, v, step):
    r"""Metric-projection retraction :math:`\sqrt{P}(W + sV)/\|W + sV\|_F`."""

    Y = w.mat + step * as_matrix(v)
    nrm = torch.linalg.norm(Y).item()
    if nrm == 0.0:
        raise ValueError("Retraction through the origin is undefined.")

    return Precoder(Y * (math.sqrt(w.power) / nrm), w.power)


def transport(w_from, w_to, v):
    r"""Vector transport by projection onto the tangent space at ``w_to``."""

    if w_to is w_from:
        return TangentVector(as_matrix(v), w_to)
    return project_tangent(w_to, v)


def random_point(dims, power=1.0, seed=None):
    r"""Random precoder with i.i.d. complex Gaussian entries, scaled onto the sphere.

    Parameters
    ----------
    dims : tuple
        ``(N_t, N_s)``.
    power : float
        Power budget :math:`P`.
    seed : int, SeedSequence or numpy Generator, optional
        Source of randomness.

    """

    rng = as_rng(seed)
    Z = complex_normal(rng, tuple(dims))
    return Precoder(Z * (math.sqrt(power) / torch.linalg.norm(Z).item()), power)
