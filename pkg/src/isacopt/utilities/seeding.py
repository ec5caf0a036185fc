import numpy as np
import torch

# Purpose codes keep independent random streams apart even when they share
# a base seed and indices.
SCENARIO = 1
PRIOR = 2
ITERATION = 3
EVALUATION = 4
INITIAL_POINT = 5
GRADCHECK = 6
FIXED_SAMPLES = 7


def seed_sequence(base_seed, purpose, *indices):
    r"""Derives the seed sequence for one random stream.

    Parameters
    ----------
    base_seed : int
        Non-negative experiment-level seed.
    purpose : int
        One of the purpose codes of this module.
    indices : int
        Further non-negative indices (run, iteration, cell, ...).

    Returns
    -------
    A :any:`numpy.random.SeedSequence`.

    """

    entropy = [int(base_seed), int(purpose)] + [int(i) for i in indices]
    if any(e < 0 for e in entropy):
        raise ValueError(f"Seeds and indices must be non-negative, got {entropy}.")

    return np.random.SeedSequence(entropy)


def derive_rng(base_seed, purpose, *indices):

    return np.random.default_rng(seed_sequence(base_seed, purpose, *indices))


def derive_seed(base_seed, purpose, *indices):
    r"""A single 63-bit integer seed, suitable for logging and for nesting."""

    state = seed_sequence(base_seed, purpose, *indices).generate_state(1, dtype=np.uint64)
    return int(state[0] >> np.uint64(1))


def as_rng(seed):
    r"""Accepts an integer seed, a seed sequence, or a generator."""

    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_normal(rng, shape):
    r"""Draws circularly-symmetric unit-variance complex Gaussian samples.

    Returns
    -------
    A ``torch.complex128`` tensor of the requested shape.

    """

    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return torch.from_numpy((re + 1j*im) / np.sqrt(2.0))
