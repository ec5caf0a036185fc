r"""Bayesian Fisher information of joint channel-parameter estimation and
symbol detection, and the sensing/communication objective built from it.

With :math:`c = 2/\sigma_z^2` and samples :math:`\xi_n`, the parameter
block is

.. math::
    F(W) = \frac{c}{N} \sum_n \sum_m \Re\{(\Lambda_m^H T^H \bar W W^\top T \Lambda_m) \circ (R^H R)\} + C_\xi^{-1},

and the symbol block on resource element :math:`m` collapses to
:math:`2\log\det(c W^H K_m W + 2I)`.  Since every :math:`\Lambda_m` is
diagonal, the sum over resource elements only involves
:math:`\Gamma = \sum_m \bar\lambda_m \lambda_m^\top`, which depends on the
samples but not on :math:`W`.
"""

__all__ = ["PriorSpec", "WeightMatrix", "SampleSet", "ObjectiveConfig", "BfimMatrix", "SampledObjective",
           "fim_param_block", "fim_param_block_given_symbol", "fim_param_block_avg", "channel_gram_avg",
           "prior_fim", "objective_sensing", "objective_comm", "objective", "symbol_block",
           "assemble_bfim", "bcrb", "ergodic_rate", "rate_upper_bound"]

import logging
from dataclasses import dataclass

import torch

from isacopt.manifold import as_matrix
from isacopt.system_model import ChannelParams
from isacopt.system_model import ResourceGrid
from isacopt.system_model import SystemConfig
from isacopt.system_model import as_grid
from isacopt.system_model import channel_matrices
from isacopt.system_model import path_weights
from isacopt.system_model import receive_factor
from isacopt.system_model import transmit_factor
from isacopt.utilities.linalg import cholesky
from isacopt.utilities.linalg import inverse_pd
from isacopt.utilities.linalg import logdet_pd
from isacopt.utilities.linalg import real_block

logger = logging.getLogger(__name__)


def _as_vector(x, what):

    x = torch.as_tensor(x, dtype=torch.float64).flatten()
    if x.numel() == 0 or x.numel() % 6 != 0:
        raise ValueError(f"{what} must have length 6L with L >= 1, got {x.numel()}.")
    return x


@dataclass(frozen=True, eq=False)
class PriorSpec:
    r"""Gaussian prior :math:`\mathcal{N}(\mu_\xi, \mathrm{diag}(C_\xi))`."""

    mean: torch.Tensor
    cov_diag: torch.Tensor

    def __post_init__(self):

        mean = _as_vector(self.mean, "Prior mean")
        cov_diag = _as_vector(self.cov_diag, "Prior variance")

        if mean.shape != cov_diag.shape:
            raise ValueError(f"Prior mean and variance lengths differ: {mean.numel()} != {cov_diag.numel()}.")
        if not torch.all(cov_diag > 0):
            raise ValueError("Prior variances must be strictly positive.")

        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov_diag", cov_diag)

    @property
    def dim(self):
        return self.mean.numel()

    @property
    def n_paths(self):
        return self.dim // 6

    @property
    def precision(self):
        return 1.0 / self.cov_diag


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    r"""Diagonal parameter weighting :math:`J`."""

    diag: torch.Tensor

    def __post_init__(self):

        diag = _as_vector(self.diag, "Weight diagonal")
        if not torch.all(diag > 0):
            raise ValueError("Weight matrix entries must be strictly positive.")
        object.__setattr__(self, "diag", diag)

    @classmethod
    def identity(cls, n_paths):
        return cls(torch.ones(6 * n_paths, dtype=torch.float64))

    @property
    def dim(self):
        return self.diag.numel()


@dataclass(frozen=True, eq=False)
class SampleSet:
    r"""Channel parameter draws :math:`\xi_1, \ldots, \xi_N`.

    Parameters
    ----------
    samples : ChannelParams or iterable of ChannelParams
        Either parameters batched along a leading sample dimension, or a
        list of unbatched draws.
    seed : int, optional
        Seed the samples were drawn with, kept for bookkeeping.

    """

    samples: ChannelParams
    seed: int = None

    def __post_init__(self):

        samples = self.samples
        if not isinstance(samples, ChannelParams):
            samples = list(samples)
            if len(samples) == 0:
                raise ValueError("A sample set needs at least one sample.")
            n_paths = {p.n_paths for p in samples}
            if len(n_paths) != 1:
                raise ValueError(f"All samples must share the path count, got {sorted(n_paths)}.")
            samples = ChannelParams.stack(samples)
        elif len(samples.batch_shape) == 0:
            samples = samples[None]

        if len(samples.batch_shape) != 1:
            raise ValueError(f"Samples must carry exactly one batch dimension, got {tuple(samples.batch_shape)}.")
        if samples.batch_shape[0] < 1:
            raise ValueError("A sample set needs at least one sample.")

        object.__setattr__(self, "samples", samples)

    @property
    def n_samples(self):
        return self.samples.batch_shape[0]

    @property
    def n_paths(self):
        return self.samples.n_paths

    def __len__(self):
        return self.n_samples

    def __getitem__(self, n):
        return self.samples[n]

    def __iter__(self):
        for n in range(self.n_samples):
            yield self.samples[n]


@dataclass(frozen=True, eq=False)
class ObjectiveConfig:
    r"""Everything the objective needs besides the precoder and the samples."""

    alpha: float
    system: SystemConfig
    prior: PriorSpec
    weights: WeightMatrix
    grid: ResourceGrid

    def __post_init__(self):

        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}.")
        if self.prior.dim != self.weights.dim:
            raise ValueError(f"Prior dimension {self.prior.dim} does not match weight dimension {self.weights.dim}.")
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def n_paths(self):
        return self.prior.n_paths

    @property
    def m_count(self):
        return self.grid.m_count

    def with_alpha(self, alpha):
        return ObjectiveConfig(alpha, self.system, self.prior, self.weights, self.grid)


@dataclass(frozen=True, eq=False)
class BfimMatrix:
    r"""Block-diagonal Bayesian FIM.

    Parameters
    ----------
    xi_block : torch.Tensor
        Real symmetric :math:`6L \times 6L` channel-parameter block.
    symbol_blocks : torch.Tensor
        Real symmetric symbol blocks, shape ``(M, 2N_s, 2N_s)``.

    """

    xi_block: torch.Tensor
    symbol_blocks: torch.Tensor

    @property
    def dim(self):
        M, n, _ = self.symbol_blocks.shape
        return self.xi_block.shape[-1] + M * n

    def dense(self):
        return torch.block_diag(self.xi_block, *self.symbol_blocks)

    def logdet(self):
        return (logdet_pd(self.xi_block, "parameter block").item() +
                logdet_pd(self.symbol_blocks, "symbol block").sum().item())

    def inverse(self):
        return BfimMatrix(inverse_pd(self.xi_block, "parameter block"),
                          inverse_pd(self.symbol_blocks, "symbol block"))


def _param_block_sum(V, weight):
    r"""Computes :math:`\Re\{\mathrm{weight} \circ V^H V\}`, batched."""

    return (weight * (V.conj().transpose(-2, -1) @ V)).real


class SampledObjective:
    r"""The stochastic objective :math:`\hat f(W;\alpha)` bound to one sample set.

    All sample-dependent factors (transmit/receive factors, the per-sample
    path-weight Gram :math:`\Gamma_n \circ R_n^H R_n`, and the averaged
    channel Grams :math:`K_m^N`) are computed once when a sample set is
    bound.  Evaluating the objective or its gradient at another precoder
    then only costs the :math:`W`-dependent work.

    Parameters
    ----------
    oc : ObjectiveConfig
        Objective configuration.
    sample_set : SampleSet, optional
        Sample set to bind immediately.
    chunk_size : int, optional
        Number of samples processed at once while binding.

    """

    def __init__(self, oc, sample_set=None, chunk_size=32):

        self.oc = oc
        self.chunk_size = chunk_size

        # Noise scaling c = 2 / sigma^2
        self.c = 2.0 / oc.system.noise_power

        # The sample set the caches were built for
        self.sample_set = None
        self._is_setup = False

        # Transmit factor T_n, (N, N_t, 6L)
        self.t_mat = None
        # Hadamard product of path-weight Gram and receive Gram, (N, 6L, 6L)
        self.weight_gram = None
        # Averaged channel Grams K_m, (M, N_t, N_t)
        self.channel_grams = None

        if sample_set is not None:
            self.bind(sample_set)

    def bind(self, sample_set):

        if self._requires_reset(sample_set):
            if self._is_setup:
                self._teardown()
            self._setup(sample_set)

        return self

    def _requires_reset(self, sample_set):
        return not self._is_setup or sample_set is not self.sample_set

    def _setup(self, sample_set):

        oc = self.oc
        params = sample_set.samples

        if params.n_paths != oc.n_paths:
            raise ValueError(f"Samples have {params.n_paths} paths but the prior describes {oc.n_paths}.")

        N = sample_set.n_samples
        n_tx = oc.system.n_tx

        # Per-element tensors exist for one chunk of samples at a time.
        gammas = []
        grams = torch.zeros(oc.m_count, n_tx, n_tx, dtype=torch.complex128)
        for start in range(0, N, self.chunk_size):
            chunk = params[start:start + self.chunk_size]

            lam = path_weights(chunk, oc.grid, oc.system)
            gammas.append(torch.einsum("nmi,nmj->nij", lam.conj(), lam))

            H = channel_matrices(chunk, oc.grid, oc.system)
            grams += torch.einsum("nmrt,nmrs->mts", H.conj(), H)

        R = receive_factor(params, oc.system)
        self.t_mat = transmit_factor(params, oc.system)
        self.weight_gram = torch.cat(gammas) * (R.conj().transpose(-2, -1) @ R)
        self.channel_grams = grams / N

        self.sample_set = sample_set
        self._is_setup = True

        logger.debug("bound %d samples of %d paths over %d resource elements",
                     sample_set.n_samples, params.n_paths, oc.m_count)

    def _teardown(self):

        self.t_mat = None
        self.weight_gram = None
        self.channel_grams = None

        self.sample_set = None
        self._is_setup = False

    def _check(self, W):

        if not self._is_setup:
            raise RuntimeError("No sample set is bound to the objective.")
        expected = (self.oc.system.n_tx, self.oc.system.n_streams)
        if tuple(W.shape) != expected:
            raise ValueError(f"Precoder shape {tuple(W.shape)} does not match (n_tx, n_streams) = {expected}.")

    # Sensing part

    def information_sum(self, w):
        r"""Sample mean of :math:`\sum_m S_m(W, \xi_n)`, without the noise scaling."""

        W = as_matrix(w)
        self._check(W)
        V = torch.einsum("tq,nti->nqi", W, self.t_mat)
        return _param_block_sum(V, self.weight_gram).mean(0)

    def sensing_matrix(self, w):
        r"""Parameter block :math:`c \sum_m S_m^N(W) + C_\xi^{-1}` of the BFIM."""

        S = self.information_sum(w)
        return self.c * S + torch.diag(self.oc.prior.precision)

    def _weighted_sensing_matrix(self, w):

        j = self.oc.weights.diag
        return j[:, None] * self.sensing_matrix(w) * j[None, :]

    def sensing(self, w):
        r"""Sensing term :math:`\hat f_s(W) = \log\det(J F(W) J)`."""

        return logdet_pd(self._weighted_sensing_matrix(w), "weighted parameter BFIM").item()

    def sensing_gradient(self, w):

        W = as_matrix(w)
        self._check(W)

        j = self.oc.weights.diag
        L = cholesky(self._weighted_sensing_matrix(W), "weighted parameter BFIM")
        Z = j[:, None] * torch.cholesky_inverse(L) * j[None, :]

        E = Z * self.weight_gram
        TW = torch.einsum("nti,tq->niq", self.t_mat, W)
        G = torch.einsum("nti,nij,njq->tq", self.t_mat.conj(), E, TW)

        return (self.c / self.sample_set.n_samples) * G

    # Communication part

    def symbol_gram(self, w):
        r"""Per-element :math:`A_m = c W^H K_m^N W`, shape ``(M, N_s, N_s)``."""

        W = as_matrix(w)
        self._check(W)
        return self.c * (W.conj().T @ self.channel_grams @ W)

    def _comm_matrices(self, w):

        A = self.symbol_gram(w)
        return A + 2.0 * torch.eye(A.shape[-1], dtype=A.dtype)

    def comm(self, w):
        r"""Communication term :math:`\hat f_c(W) = \sum_m 2\log\det(A_m + 2I)`."""

        return 2.0 * logdet_pd(self._comm_matrices(w), "symbol information").sum().item()

    def comm_gradient(self, w):

        W = as_matrix(w)
        B_inv = inverse_pd(self._comm_matrices(W), "symbol information")
        return 2.0 * self.c * torch.einsum("mts,sq,mqp->tp", self.channel_grams, W, B_inv)

    # Combined objective

    def value(self, w):

        alpha = self.oc.alpha
        M = self.oc.m_count

        f = 0.0
        if alpha > 0.0:
            f += alpha * self.sensing(w)
        if alpha < 1.0:
            f += (1.0 - alpha) / M * self.comm(w)
        return f

    def gradient(self, w):
        r"""Euclidean gradient :math:`\partial \hat f / \partial \bar W`.

        Under this convention
        :math:`\hat f(W + \Delta) = \hat f(W) + 2\Re\,\mathrm{tr}(G^H \Delta) + o(\|\Delta\|)`.

        """

        W = as_matrix(w)
        self._check(W)

        alpha = self.oc.alpha
        M = self.oc.m_count

        G = torch.zeros_like(W)
        if alpha > 0.0:
            G = G + alpha * self.sensing_gradient(W)
        if alpha < 1.0:
            G = G + (1.0 - alpha) / M * self.comm_gradient(W)
        return G

    def __call__(self, w):
        return self.value(w)

    def bfim(self, w):

        symbol_blocks = real_block(self._comm_matrices(w))
        return BfimMatrix(self.sensing_matrix(w), symbol_blocks)


def _single_sample_set(params):

    if isinstance(params, SampleSet):
        return params
    return SampleSet(params)


def _param_block(W, params, re, cfg):

    params = _single_sample_set(params).samples
    grid = as_grid(re)

    lam = path_weights(params, grid, cfg)[:, 0, :]
    T = transmit_factor(params, cfg)
    R = receive_factor(params, cfg)

    weight = (lam.conj().unsqueeze(-1) * lam.unsqueeze(-2)) * (R.conj().transpose(-2, -1) @ R)
    V = torch.einsum("tq,nti->nqi", W, T)
    return _param_block_sum(V, weight)


def fim_param_block(w, params, re, cfg):
    r"""Expected-over-symbols parameter information :math:`S_m(W, \xi)` on one element.

    Computes :math:`\Re\{(\Lambda_m^H T^H \bar W W^\top T \Lambda_m) \circ (R^H R)\}`,
    the real part taken of the whole Hadamard product.

    Parameters
    ----------
    w : Precoder or torch.Tensor
        Precoder :math:`W`.
    params : ChannelParams
        One unbatched parameter draw.
    re : tuple
        Resource element ``(n, k)``.
    cfg : SystemConfig
        System configuration.

    Returns
    -------
    Real symmetric :math:`6L \times 6L` tensor.

    """

    W = as_matrix(w)
    if W.shape[0] != cfg.n_tx:
        raise ValueError(f"Precoder has {W.shape[0]} rows but the system has {cfg.n_tx} transmit antennas.")
    return _param_block(W, params, re, cfg)[0]


def fim_param_block_given_symbol(x, params, re, cfg):
    r"""Conditional parameter FIM :math:`c\,\Re\{(\Lambda_m^H T^H \bar x x^\top T \Lambda_m) \circ (R^H R)\}`
    for one fixed transmit vector :math:`x`."""

    x = torch.as_tensor(x, dtype=torch.complex128).reshape(-1, 1)
    return (2.0 / cfg.noise_power) * fim_param_block(x, params, re, cfg)


def fim_param_block_avg(w, ss, re, cfg):
    r""":math:`S_m^N(W) = \frac{1}{N}\sum_n S_m(W, \xi_n)`."""

    W = as_matrix(w)
    if W.shape[0] != cfg.n_tx:
        raise ValueError(f"Precoder has {W.shape[0]} rows but the system has {cfg.n_tx} transmit antennas.")
    return _param_block(W, ss, re, cfg).mean(0)


def channel_gram_avg(ss, re, cfg):
    r""":math:`K_m^N = \frac{1}{N}\sum_n H_m(\xi_n)^H H_m(\xi_n)`."""

    H = channel_matrices(_single_sample_set(ss).samples, as_grid(re), cfg)[:, 0]
    return torch.einsum("nrt,nrs->ts", H.conj(), H) / H.shape[0]


def prior_fim(prior, m_count, n_streams):
    r"""Prior information :math:`\mathrm{blkdiag}(C_\xi^{-1}, 2I_{2N_sM})`."""

    if m_count < 0 or n_streams < 1:
        raise ValueError(f"Invalid dimensions m_count={m_count}, n_streams={n_streams}.")

    symbols = 2.0 * torch.ones(2 * n_streams * m_count, dtype=torch.float64)
    return torch.diag(torch.cat([prior.precision, symbols]))


def objective_sensing(w, ss, oc):

    return SampledObjective(oc, ss).sensing(w)


def objective_comm(w, ss, oc):

    return SampledObjective(oc, ss).comm(w)


def objective(w, ss, oc):
    r""":math:`\hat f(W;\alpha) = \alpha \hat f_s(W) + \frac{1-\alpha}{M} \hat f_c(W)`."""

    return SampledObjective(oc, ss).value(w)


def symbol_block(w, ss, re, oc):
    r"""Real :math:`2N_s \times 2N_s` symbol block :math:`c\,\Re\{\tilde W^H E[\tilde H^H \tilde H] \tilde W\} + 2I`."""

    W = as_matrix(w)
    K = channel_gram_avg(ss, re, oc.system)
    A = (2.0 / oc.system.noise_power) * (W.conj().T @ K @ W)
    return real_block(A + 2.0 * torch.eye(A.shape[-1], dtype=A.dtype))


def assemble_bfim(w, ss, oc):

    return SampledObjective(oc, ss).bfim(w)


def bcrb(bfim):
    r"""Bayesian Cramér-Rao bound, the blockwise inverse of a BFIM.

    Raises
    ------
    NotPositiveDefiniteError
        If any block is singular or indefinite.

    """

    return bfim.inverse()


def _mutual_information(W, gram, noise_power):

    A = (W.conj().T @ gram @ W) / noise_power
    return logdet_pd(A + torch.eye(A.shape[-1], dtype=A.dtype), "rate matrix")


def ergodic_rate(w, ss, re, cfg):
    r"""Sample-mean mutual information :math:`\frac{1}{N}\sum_n \log\det(\sigma^{-2} W^H H_n^H H_n W + I)`."""

    W = as_matrix(w)
    H = channel_matrices(_single_sample_set(ss).samples, as_grid(re), cfg)[:, 0]
    grams = H.conj().transpose(-2, -1) @ H
    return _mutual_information(W, grams, cfg.noise_power).mean().item()


def rate_upper_bound(w, ss, re, cfg):
    r"""Jensen upper bound :math:`\log\det(\sigma^{-2} W^H K_m^N W + I)` of :func:`ergodic_rate`."""

    W = as_matrix(w)
    return _mutual_information(W, channel_gram_avg(ss, re, cfg), cfg.noise_power).item()
