r"""Random scenarios, Gaussian prior draws and the default parameter weighting.

Paths are drawn independently: complex standard normal gains, uniform
distances (converted to delays), uniform radial speeds (converted to
Doppler shifts) and uniform angles of departure and arrival.
"""

__all__ = ["PriorStd", "ScenarioSpec", "sample_scenario", "prior_spec", "sample_prior", "sample_from_prior",
           "default_weight_matrix"]

import math
from dataclasses import dataclass
from dataclasses import field

import numpy as np
import torch

from isacopt.bfim import PriorSpec
from isacopt.bfim import SampleSet
from isacopt.bfim import WeightMatrix
from isacopt.system_model import SPEED_OF_LIGHT
from isacopt.system_model import ChannelParams
from isacopt.utilities.seeding import as_rng
from isacopt.utilities.seeding import complex_normal


@dataclass(frozen=True)
class PriorStd:
    r"""Prior standard deviations per parameter type (SI units, radians)."""

    gain: float = 1e-1
    delay: float = 1e-7
    doppler: float = 50.0
    angle: float = 1e-1

    def __post_init__(self):

        for name in ("gain", "delay", "doppler", "angle"):
            if not getattr(self, name) > 0:
                raise ValueError(f"prior_std.{name} must be strictly positive, got {getattr(self, name)}.")


def _ordered_pair(value, name):

    lo, hi = (float(v) for v in value)
    if lo > hi:
        raise ValueError(f"{name} must be ordered (lo <= hi), got ({lo}, {hi}).")
    return (lo, hi)


@dataclass(frozen=True)
class ScenarioSpec:
    r"""Random scenario description.

    Parameters
    ----------
    path_count : int
        Number of propagation paths :math:`L`.
    distance_range : tuple
        Path lengths in meters.
    speed_range : tuple
        Relative radial speeds in m/s.
    angle_range : tuple
        AoD and AoA range in radians.
    prior_std : PriorStd
        Prior standard deviations around the drawn scenario.
    two_way_doppler : bool
        Use the round-trip Doppler :math:`2 v f_c / c` instead of :math:`v f_c / c`.

    """

    path_count: int = 3
    distance_range: tuple = (10.0, 800.0)
    speed_range: tuple = (0.0, 80.0)
    angle_range: tuple = (-math.pi / 2, math.pi / 2)
    prior_std: PriorStd = field(default_factory=PriorStd)
    two_way_doppler: bool = False

    def __post_init__(self):

        if int(self.path_count) != self.path_count or self.path_count < 1:
            raise ValueError(f"path_count must be a positive integer, got {self.path_count}.")

        object.__setattr__(self, "distance_range", _ordered_pair(self.distance_range, "distance_range"))
        object.__setattr__(self, "speed_range", _ordered_pair(self.speed_range, "speed_range"))
        object.__setattr__(self, "angle_range", _ordered_pair(self.angle_range, "angle_range"))

        if self.distance_range[0] < 0:
            raise ValueError("Path distances cannot be negative.")

    @property
    def doppler_factor(self):
        return 2.0 if self.two_way_doppler else 1.0


def sample_scenario(spec, cfg, seed):
    r"""Draws ground-truth channel parameters.

    Parameters
    ----------
    spec : ScenarioSpec
        Scenario description.
    cfg : SystemConfig
        System configuration, only ``carrier_freq`` is used.
    seed : int, SeedSequence or numpy Generator
        Source of randomness.

    Returns
    -------
    Unbatched :any:`ChannelParams`.

    """

    rng = as_rng(seed)
    L = spec.path_count

    gains = complex_normal(rng, (L,))
    distances = rng.uniform(*spec.distance_range, size=L)
    speeds = rng.uniform(*spec.speed_range, size=L)
    aod = rng.uniform(*spec.angle_range, size=L)
    aoa = rng.uniform(*spec.angle_range, size=L)

    delays = distances / SPEED_OF_LIGHT
    dopplers = spec.doppler_factor * speeds * cfg.carrier_freq / SPEED_OF_LIGHT

    return ChannelParams(gains.real, gains.imag,
                         torch.from_numpy(delays), torch.from_numpy(dopplers),
                         torch.from_numpy(aod), torch.from_numpy(aoa))


def prior_spec(mean, spec):
    r"""Diagonal Gaussian prior centred at ``mean`` with the scenario's standard deviations."""

    L = mean.n_paths
    std = spec.prior_std
    per_block = [std.gain, std.gain, std.delay, std.doppler, std.angle, std.angle]
    variances = torch.tensor(per_block, dtype=torch.float64).repeat_interleave(L) ** 2

    return PriorSpec(mean.to_vector(), variances)


def sample_from_prior(prior, n, seed):
    r"""Draws ``n`` independent parameter vectors from a :any:`PriorSpec`.

    Returns
    -------
    A :any:`SampleSet` with ``n`` samples.

    """

    if n < 1:
        raise ValueError(f"At least one sample is required, got {n}.")

    rng = as_rng(seed)
    noise = torch.from_numpy(rng.standard_normal((n, prior.dim)))
    xi = prior.mean + torch.sqrt(prior.cov_diag) * noise

    recorded = int(seed) if isinstance(seed, (int, np.integer)) else None
    return SampleSet(ChannelParams.from_vector(xi), seed=recorded)


def sample_prior(mean, spec, n, seed):

    return sample_from_prior(prior_spec(mean, spec), n, seed)


def default_weight_matrix(l_paths, f0):
    r"""Weighting :math:`J` with :math:`1/f_0` on delays, :math:`f_0` on Dopplers, one elsewhere."""

    if not f0 > 0:
        raise ValueError(f"f0 must be strictly positive, got {f0}.")

    per_block = torch.tensor([1.0, 1.0, 1.0 / f0, f0, 1.0, 1.0], dtype=torch.float64)
    return WeightMatrix(per_block.repeat_interleave(l_paths))
