r"""MIMO-OFDM system description and multipath channel parameterization.

Angles are in radians, delays in seconds, Doppler shifts in Hz.  Every
function accepts channel parameters with arbitrary leading (batch)
dimensions, so that a whole set of prior samples can be processed at once.
"""

__all__ = ["SystemConfig", "ResourceGrid", "ChannelParams", "StructureMatrices",
           "steering_vector", "steering_derivative", "steering_matrix", "steering_derivative_matrix",
           "phase_rotation", "phase_rotations", "path_weights",
           "transmit_factor", "receive_factor",
           "channel_matrix", "channel_matrices", "structure_matrices", "param_jacobian",
           "resource_grid", "as_grid"]

import math
from dataclasses import dataclass

import torch

from isacopt.utilities.linalg import khatri_rao

SPEED_OF_LIGHT = 299792458.0

# Order of the parameter types in the flattened vector xi.
PARAMETER_BLOCKS = ("gains_re", "gains_im", "delays", "dopplers", "aod", "aoa")


@dataclass(frozen=True)
class SystemConfig:
    r"""Antenna, stream, and OFDM numerology of the link.

    Parameters
    ----------
    n_tx : int
        Number of transmit antennas :math:`N_t`.
    n_rx : int
        Number of receive antennas :math:`N_r`.
    n_streams : int
        Number of data streams :math:`N_s \le N_t`.
    subcarrier_spacing : float
        Subcarrier spacing :math:`f_0` in Hz.
    symbol_duration : float, optional
        OFDM symbol duration :math:`T_s` in seconds.  Defaults to
        :math:`1/f_0` (no cyclic prefix).
    noise_power : float
        Linear noise power :math:`\sigma_z^2`.
    power_budget : float
        Transmit power :math:`P = \mathrm{tr}(WW^H)`.
    carrier_freq : float
        Carrier frequency :math:`f_c` in Hz, only used to convert velocities
        into Doppler shifts.

    """

    n_tx: int = 8
    n_rx: int = 8
    n_streams: int = 3
    subcarrier_spacing: float = 15e3
    symbol_duration: float = None
    noise_power: float = 1.0
    power_budget: float = 1.0
    carrier_freq: float = 28e9

    def __post_init__(self):

        for name in ("n_tx", "n_rx", "n_streams"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value}.")

        if self.n_streams > self.n_tx:
            raise ValueError(f"n_streams ({self.n_streams}) cannot exceed n_tx ({self.n_tx}).")

        if self.symbol_duration is None:
            object.__setattr__(self, "symbol_duration", 1.0 / self.subcarrier_spacing)

        for name in ("subcarrier_spacing", "symbol_duration", "noise_power", "power_budget", "carrier_freq"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}.")


@dataclass(frozen=True, eq=False)
class ResourceGrid:
    r"""An ordered set of resource elements :math:`(n_m, k_m)`.

    Parameters
    ----------
    subcarriers : torch.Tensor
        Subcarrier indices :math:`n_m`, shape ``(M,)``.
    symbols : torch.Tensor
        OFDM symbol indices :math:`k_m`, shape ``(M,)``.

    """

    subcarriers: torch.Tensor
    symbols: torch.Tensor

    def __post_init__(self):

        n = torch.as_tensor(self.subcarriers, dtype=torch.int64).flatten()
        k = torch.as_tensor(self.symbols, dtype=torch.int64).flatten()

        if n.shape != k.shape:
            raise ValueError("Subcarrier and symbol index lists must have equal length.")
        if n.numel() == 0:
            raise ValueError("A resource grid needs at least one element.")
        if torch.any(n < 0) or torch.any(k < 0):
            raise ValueError("Resource element indices must be non-negative.")
        if len(set(zip(n.tolist(), k.tolist()))) != n.numel():
            raise ValueError("Resource elements must not repeat.")

        object.__setattr__(self, "subcarriers", n)
        object.__setattr__(self, "symbols", k)

    @classmethod
    def from_elements(cls, elements):

        elements = list(elements)
        return cls(torch.tensor([e[0] for e in elements], dtype=torch.int64),
                   torch.tensor([e[1] for e in elements], dtype=torch.int64))

    @property
    def m_count(self):
        return self.subcarriers.numel()

    @property
    def elements(self):
        return list(zip(self.subcarriers.tolist(), self.symbols.tolist()))

    def __len__(self):
        return self.m_count

    def __getitem__(self, m):
        return (int(self.subcarriers[m]), int(self.symbols[m]))


def resource_grid(n_subcarriers, n_symbols):
    r"""Rectangular grid, subcarrier index running fastest.

    Parameters
    ----------
    n_subcarriers : int
        Number of subcarriers, indices ``0 .. n_subcarriers-1``.
    n_symbols : int
        Number of OFDM symbols, indices ``0 .. n_symbols-1``.

    Returns
    -------
    A :any:`ResourceGrid` with ``n_subcarriers * n_symbols`` elements ordered
    ``(0, 0), (1, 0), ..., (0, 1), (1, 1), ...``.

    """

    if n_subcarriers < 1 or n_symbols < 1:
        raise ValueError(f"Grid dimensions must be positive, got {n_subcarriers} x {n_symbols}.")

    n = torch.arange(n_subcarriers, dtype=torch.int64).repeat(n_symbols)
    k = torch.arange(n_symbols, dtype=torch.int64).repeat_interleave(n_subcarriers)

    return ResourceGrid(n, k)


def as_grid(re):

    if isinstance(re, ResourceGrid):
        return re
    return ResourceGrid.from_elements([re])


@dataclass(frozen=True, eq=False)
class ChannelParams:
    r"""Multipath parameters :math:`\xi` of :math:`L` propagation paths.

    Every field is a real tensor with shape ``(..., L)``; the leading
    dimensions, if any, index independent parameter draws.

    """

    gains_re: torch.Tensor
    gains_im: torch.Tensor
    delays: torch.Tensor
    dopplers: torch.Tensor
    aod: torch.Tensor
    aoa: torch.Tensor

    def __post_init__(self):

        shape = None
        for name in PARAMETER_BLOCKS:
            value = torch.as_tensor(getattr(self, name), dtype=torch.float64)
            value = torch.atleast_1d(value)
            object.__setattr__(self, name, value)
            if shape is None:
                shape = value.shape
            elif value.shape != shape:
                raise ValueError(f"All parameter vectors must share one shape; {name} has {tuple(value.shape)}, "
                                 f"expected {tuple(shape)}.")

        if shape[-1] < 1:
            raise ValueError("At least one propagation path is required.")

    @property
    def n_paths(self):
        return self.delays.shape[-1]

    @property
    def batch_shape(self):
        return self.delays.shape[:-1]

    @property
    def gains(self):
        return torch.complex(self.gains_re, self.gains_im)

    def to_vector(self):
        r"""Stacks the parameters as :math:`[b_R, b_I, \tau, f_D, \theta, \phi]`."""

        return torch.cat([getattr(self, name) for name in PARAMETER_BLOCKS], dim=-1)

    @classmethod
    def from_vector(cls, xi):

        xi = torch.as_tensor(xi, dtype=torch.float64)
        if xi.shape[-1] % 6 != 0:
            raise ValueError(f"Parameter vector length must be a multiple of 6, got {xi.shape[-1]}.")

        return cls(*torch.chunk(xi, 6, dim=-1))

    def concat(self, other):
        r"""Union of two path sets (paths of ``other`` appended)."""

        return ChannelParams(*[torch.cat([getattr(self, name), getattr(other, name)], dim=-1)
                               for name in PARAMETER_BLOCKS])

    def __getitem__(self, index):
        return ChannelParams(*[getattr(self, name)[index] for name in PARAMETER_BLOCKS])

    def __len__(self):
        if len(self.batch_shape) == 0:
            raise TypeError("Unbatched channel parameters have no length.")
        return self.batch_shape[0]

    @classmethod
    def stack(cls, params):

        params = list(params)
        return cls(*[torch.stack([getattr(p, name) for p in params]) for name in PARAMETER_BLOCKS])


@dataclass(frozen=True, eq=False)
class StructureMatrices:
    r"""Factor matrices of the parameter Jacobian on one resource element.

    ``lambda_m`` is the block diagonal
    :math:`\Lambda_m = \mathrm{blkdiag}\{\Omega_m, j\Omega_m, G_mB, F_mB, \Omega_mB, \Omega_mB\}`,
    ``t_mat`` and ``r_mat`` the transmit and receive steering factors.  The
    diagonal :math:`L \times L` factors are kept as vectors.

    """

    lambda_m: torch.Tensor
    t_mat: torch.Tensor
    r_mat: torch.Tensor
    b: torch.Tensor
    omega: torch.Tensor
    g: torch.Tensor
    f: torch.Tensor

    @property
    def lambda_diag(self):
        return torch.diagonal(self.lambda_m, dim1=-2, dim2=-1)


def _element_phases(n_elem, dtype=torch.float64):

    return math.pi * torch.arange(n_elem, dtype=dtype)


def steering_matrix(angles, n_elem):
    r"""Half-wavelength ULA responses for a set of angles.

    Parameters
    ----------
    angles : torch.Tensor
        Angles in radians, shape ``(..., L)``.
    n_elem : int
        Number of array elements.

    Returns
    -------
    Complex tensor of shape ``(..., n_elem, L)`` with entries
    :math:`e^{j\pi p \sin\theta_l}`.

    """

    angles = torch.as_tensor(angles, dtype=torch.float64)
    phase = _element_phases(n_elem).unsqueeze(-1) * torch.sin(angles).unsqueeze(-2)
    return torch.polar(torch.ones_like(phase), phase)


def steering_derivative_matrix(angles, n_elem):
    r"""Angle derivatives of :func:`steering_matrix`."""

    angles = torch.as_tensor(angles, dtype=torch.float64)
    a = steering_matrix(angles, n_elem)
    scale = _element_phases(n_elem).unsqueeze(-1) * torch.cos(angles).unsqueeze(-2)
    return 1j * scale * a


def steering_vector(angle, n_elem):

    if n_elem < 1:
        raise ValueError(f"An array needs at least one element, got {n_elem}.")

    angle = torch.as_tensor(angle, dtype=torch.float64)
    return steering_matrix(angle.unsqueeze(-1), n_elem)[..., 0]


def steering_derivative(angle, n_elem):

    if n_elem < 1:
        raise ValueError(f"An array needs at least one element, got {n_elem}.")

    angle = torch.as_tensor(angle, dtype=torch.float64)
    return steering_derivative_matrix(angle.unsqueeze(-1), n_elem)[..., 0]


def phase_rotation(n, k, tau, fd, cfg):
    r"""Delay-Doppler phase :math:`\omega = e^{-j2\pi n f_0 \tau} e^{j2\pi f_D k T_s}`."""

    phase = (-2.0 * math.pi * n * cfg.subcarrier_spacing * torch.as_tensor(tau, dtype=torch.float64) +
             2.0 * math.pi * torch.as_tensor(fd, dtype=torch.float64) * k * cfg.symbol_duration)
    return torch.polar(torch.ones_like(phase), phase)


def phase_rotations(params, grid, cfg):
    r"""Phases :math:`\omega_{m,l}` for every resource element and path.

    Returns
    -------
    Complex tensor of shape ``(..., M, L)``.

    """

    grid = as_grid(grid)
    n = grid.subcarriers.to(torch.float64).unsqueeze(-1)
    k = grid.symbols.to(torch.float64).unsqueeze(-1)

    phase = (-2.0 * math.pi * cfg.subcarrier_spacing * n * params.delays.unsqueeze(-2) +
             2.0 * math.pi * cfg.symbol_duration * k * params.dopplers.unsqueeze(-2))
    return torch.polar(torch.ones_like(phase), phase)


def path_weights(params, grid, cfg):
    r"""Diagonals of :math:`\Lambda_m` for every resource element.

    Returns
    -------
    Complex tensor of shape ``(..., M, 6L)`` holding
    :math:`[\omega, j\omega, u b, v b, \omega b, \omega b]` per element.

    """

    grid = as_grid(grid)
    omega = phase_rotations(params, grid, cfg)
    b = params.gains.unsqueeze(-2)

    n = grid.subcarriers.to(torch.float64).unsqueeze(-1)
    k = grid.symbols.to(torch.float64).unsqueeze(-1)

    # Derivatives of omega with respect to delay and Doppler
    u = -2j * math.pi * cfg.subcarrier_spacing * n * omega
    v = 2j * math.pi * cfg.symbol_duration * k * omega

    return torch.cat([omega, 1j*omega, u*b, v*b, omega*b, omega*b], dim=-1)


def transmit_factor(params, cfg):
    r"""Transmit factor :math:`T`, shape ``(..., N_t, 6L)``.

    The AoD derivative sits in the block that belongs to :math:`\theta` in
    the parameter ordering.

    """

    A = steering_matrix(params.aod, cfg.n_tx)
    D = steering_derivative_matrix(params.aod, cfg.n_tx)
    return torch.cat([A, A, A, A, D, A], dim=-1)


def receive_factor(params, cfg):
    r"""Receive factor :math:`R`, shape ``(..., N_r, 6L)``."""

    A = steering_matrix(params.aoa, cfg.n_rx)
    D = steering_derivative_matrix(params.aoa, cfg.n_rx)
    return torch.cat([A, A, A, A, A, D], dim=-1)


def channel_matrices(params, grid, cfg):
    r"""Channel matrices :math:`H_m(\xi)` on every resource element.

    Returns
    -------
    Complex tensor of shape ``(..., M, N_r, N_t)``.

    """

    beta = params.gains.unsqueeze(-2) * phase_rotations(params, grid, cfg)
    A_T = steering_matrix(params.aod, cfg.n_tx)
    A_R = steering_matrix(params.aoa, cfg.n_rx)

    return torch.einsum("...rl,...ml,...tl->...mrt", A_R, beta, A_T)


def channel_matrix(params, re, cfg):
    r"""Channel matrix :math:`H_m = \sum_l b_l \omega_{m,l} a_R(\phi_l) a_T(\theta_l)^\top`
    on the single resource element ``re = (n, k)``."""

    return channel_matrices(params, as_grid(re), cfg)[..., 0, :, :]


def structure_matrices(params, re, cfg):
    r"""Structure matrices of the parameter Jacobian on ``re = (n, k)``.

    Returns
    -------
    A :any:`StructureMatrices` instance.

    """

    grid = as_grid(re)
    lam = path_weights(params, grid, cfg)[..., 0, :]
    omega = phase_rotations(params, grid, cfg)[..., 0, :]

    n, k = grid[0]
    g = -2j * math.pi * n * cfg.subcarrier_spacing * omega
    f = 2j * math.pi * k * cfg.symbol_duration * omega

    return StructureMatrices(lambda_m=torch.diag_embed(lam),
                             t_mat=transmit_factor(params, cfg),
                             r_mat=receive_factor(params, cfg),
                             b=params.gains,
                             omega=omega,
                             g=g,
                             f=f)


def param_jacobian(params, re, x, cfg):
    r"""Jacobian of the noiseless receive signal :math:`\mu_m = H_m(\xi) x`.

    Uses the closed form :math:`(R\Lambda_m) * (x^\top T)`, with :math:`*`
    the Khatri-Rao product.

    Parameters
    ----------
    params : ChannelParams
        Unbatched channel parameters.
    re : tuple
        Resource element ``(n, k)``.
    x : torch.Tensor
        Transmit vector of length :math:`N_t`.
    cfg : SystemConfig
        System configuration.

    Returns
    -------
    Complex tensor of shape ``(N_r, 6L)``.

    """

    x = torch.as_tensor(x, dtype=torch.complex128)
    lam = path_weights(params, as_grid(re), cfg)[..., 0, :]
    R = receive_factor(params, cfg)
    T = transmit_factor(params, cfg)

    xT = torch.einsum("...t,...ti->...i", x, T).unsqueeze(-2)
    return khatri_rao(R * lam.unsqueeze(-2), xT)
