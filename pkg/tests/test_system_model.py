import math

import numpy as np
import pytest
import torch
from instances import fd_param_jacobian


def _random_params(seed, n_paths=2):

    from isacopt.sampler import ScenarioSpec
    from isacopt.sampler import sample_scenario
    from isacopt.system_model import SystemConfig

    return sample_scenario(ScenarioSpec(path_count=n_paths), SystemConfig(), seed)


def test_default_symbol_duration_is_inverse_spacing():

    from isacopt.system_model import SystemConfig

    cfg = SystemConfig(subcarrier_spacing=30e3)
    assert cfg.symbol_duration == pytest.approx(1.0 / 30e3)


config_error_parametrizations = []

config_error_parametrizations.append(pytest.param(dict(n_tx=0), id="no-antennas"))
config_error_parametrizations.append(pytest.param(dict(n_tx=2, n_streams=3), id="too-many-streams"))
config_error_parametrizations.append(pytest.param(dict(noise_power=0.0), id="zero-noise"))
config_error_parametrizations.append(pytest.param(dict(power_budget=-1.0), id="negative-power"))


@pytest.mark.parametrize("kwargs", config_error_parametrizations)
def test_invalid_system_config(kwargs):

    from isacopt.system_model import SystemConfig

    with pytest.raises(ValueError):
        SystemConfig(**kwargs)


def test_resource_grid_order():

    from isacopt.system_model import resource_grid

    grid = resource_grid(3, 2)

    assert grid.m_count == 6
    assert grid.elements == [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]


def test_resource_grid_rejects_repeats():

    from isacopt.system_model import ResourceGrid

    with pytest.raises(ValueError):
        ResourceGrid.from_elements([(0, 0), (1, 0), (0, 0)])


def test_steering_vector_values():

    from isacopt.system_model import steering_vector

    theta = 0.3
    a = steering_vector(theta, 8)

    assert a.shape == (8,)
    assert torch.allclose(torch.abs(a), torch.ones(8, dtype=torch.float64))
    assert a[0] == 1.0

    expected = torch.tensor([np.exp(1j * math.pi * p * math.sin(theta)) for p in range(8)])
    assert torch.allclose(a, expected)


def test_steering_derivative_matches_differences():

    from isacopt.system_model import steering_derivative
    from isacopt.system_model import steering_vector

    theta, h = -0.7, 1e-6
    fd = (steering_vector(theta + h, 6) - steering_vector(theta - h, 6)) / (2.0 * h)

    assert torch.allclose(steering_derivative(theta, 6), fd, atol=1e-8)


def test_steering_vector_needs_elements():

    from isacopt.system_model import steering_vector

    with pytest.raises(ValueError):
        steering_vector(0.0, 0)


def test_steering_matrices_stack_vectors():

    from isacopt.system_model import steering_derivative
    from isacopt.system_model import steering_derivative_matrix
    from isacopt.system_model import steering_matrix
    from isacopt.system_model import steering_vector

    angles = torch.tensor([-1.2, 0.0, 0.4])
    A = steering_matrix(angles, 5)
    D = steering_derivative_matrix(angles, 5)

    assert A.shape == (5, 3)
    assert D.shape == (5, 3)
    for l, theta in enumerate(angles.tolist()):
        assert torch.allclose(A[:, l], steering_vector(theta, 5))
        assert torch.allclose(D[:, l], steering_derivative(theta, 5))


def test_phase_rotations_cover_grid():

    from isacopt.system_model import SystemConfig
    from isacopt.system_model import phase_rotation
    from isacopt.system_model import phase_rotations
    from isacopt.system_model import resource_grid

    cfg = SystemConfig()
    params = _random_params(5, n_paths=3)
    grid = resource_grid(3, 2)

    omega = phase_rotations(params, grid, cfg)

    assert omega.shape == (6, 3)
    for m, (n, k) in enumerate(zip(grid.subcarriers.tolist(), grid.symbols.tolist())):
        assert torch.allclose(omega[m], phase_rotation(n, k, params.delays, params.dopplers, cfg))


def test_angle_derivative_blocks():

    from isacopt.system_model import SystemConfig
    from isacopt.system_model import receive_factor
    from isacopt.system_model import steering_derivative_matrix
    from isacopt.system_model import steering_matrix
    from isacopt.system_model import transmit_factor

    cfg = SystemConfig(n_tx=4, n_rx=3, n_streams=2)
    params = _random_params(6, n_paths=2)
    L = 2

    T = transmit_factor(params, cfg)
    R = receive_factor(params, cfg)

    A_T = steering_matrix(params.aod, cfg.n_tx)
    A_R = steering_matrix(params.aoa, cfg.n_rx)

    # AoD derivative in the fifth block, AoA derivative in the sixth
    for block in range(6):
        columns = slice(block * L, (block + 1) * L)
        expected_T = steering_derivative_matrix(params.aod, cfg.n_tx) if block == 4 else A_T
        expected_R = steering_derivative_matrix(params.aoa, cfg.n_rx) if block == 5 else A_R
        assert torch.allclose(T[:, columns], expected_T)
        assert torch.allclose(R[:, columns], expected_R)


def test_channel_matrix_is_path_sum():

    from isacopt.system_model import SystemConfig
    from isacopt.system_model import channel_matrix
    from isacopt.system_model import phase_rotation
    from isacopt.system_model import steering_vector

    cfg = SystemConfig(n_tx=4, n_rx=3, n_streams=2)
    params = _random_params(0, n_paths=3)
    n, k = 5, 2

    H = channel_matrix(params, (n, k), cfg)

    expected = torch.zeros(3, 4, dtype=torch.complex128)
    for l in range(3):
        omega = phase_rotation(n, k, params.delays[l], params.dopplers[l], cfg)
        a_r = steering_vector(params.aoa[l], 3)
        a_t = steering_vector(params.aod[l], 4)
        expected += params.gains[l] * omega * torch.outer(a_r, a_t)

    assert torch.allclose(H, expected)


def test_channel_superposition():

    from isacopt.system_model import SystemConfig
    from isacopt.system_model import channel_matrices
    from isacopt.system_model import resource_grid

    cfg = SystemConfig(n_tx=4, n_rx=4, n_streams=2)
    grid = resource_grid(4, 3)
    p1 = _random_params(1, n_paths=2)
    p2 = _random_params(2, n_paths=1)

    H = channel_matrices(p1.concat(p2), grid, cfg)

    assert torch.allclose(H, channel_matrices(p1, grid, cfg) + channel_matrices(p2, grid, cfg))


def test_parameter_vector_order():

    from isacopt.system_model import ChannelParams

    params = _random_params(3, n_paths=2)
    xi = params.to_vector()

    assert xi.shape == (12,)
    assert torch.equal(xi[4:6], params.delays)
    assert torch.equal(xi[10:12], params.aoa)
    assert torch.equal(ChannelParams.from_vector(xi).dopplers, params.dopplers)


def test_batched_parameters():

    from isacopt.system_model import ChannelParams
    from isacopt.system_model import SystemConfig
    from isacopt.system_model import channel_matrices
    from isacopt.system_model import resource_grid

    cfg = SystemConfig(n_tx=4, n_rx=2, n_streams=1)
    grid = resource_grid(2, 2)
    draws = [_random_params(s) for s in range(3)]

    batched = ChannelParams.stack(draws)
    H = channel_matrices(batched, grid, cfg)

    assert len(batched) == 3
    assert H.shape == (3, 4, 2, 4)
    for n, p in enumerate(draws):
        assert torch.allclose(H[n], channel_matrices(p, grid, cfg))


def test_mismatched_parameter_shapes():

    from isacopt.system_model import ChannelParams

    with pytest.raises(ValueError):
        ChannelParams(torch.zeros(2), torch.zeros(2), torch.zeros(2), torch.zeros(2), torch.zeros(2), torch.zeros(3))


def test_structure_matrices_shapes():

    from isacopt.system_model import SystemConfig
    from isacopt.system_model import structure_matrices

    cfg = SystemConfig(n_tx=4, n_rx=3, n_streams=2)
    s = structure_matrices(_random_params(4, n_paths=2), (3, 1), cfg)

    assert s.lambda_m.shape == (12, 12)
    assert s.t_mat.shape == (4, 12)
    assert s.r_mat.shape == (3, 12)

    # Gain blocks carry omega and j omega
    assert torch.allclose(s.lambda_diag[0:2], s.omega)
    assert torch.allclose(s.lambda_diag[2:4], 1j * s.omega)
    assert torch.allclose(s.lambda_diag[4:6], s.g * s.b)
    assert torch.allclose(s.lambda_diag[6:8], s.f * s.b)


jacobian_parametrizations = []

jacobian_parametrizations.append(pytest.param(0, (0, 0), id="origin-element"))
jacobian_parametrizations.append(pytest.param(1, (7, 3), id="inner-element"))
jacobian_parametrizations.append(pytest.param(2, (31, 13), id="far-element"))


@pytest.mark.parametrize("seed, re", jacobian_parametrizations)
def test_param_jacobian_matches_differences(seed, re):

    from isacopt.system_model import SystemConfig
    from isacopt.system_model import param_jacobian
    from isacopt.utilities.seeding import complex_normal

    cfg = SystemConfig(n_tx=4, n_rx=3, n_streams=2)
    params = _random_params(seed, n_paths=2)
    x = complex_normal(np.random.default_rng(seed + 100), (4,))

    J = param_jacobian(params, re, x, cfg)
    fd = fd_param_jacobian(params, re, x, cfg)

    assert J.shape == (3, 12)
    # Columns live on very different scales; compare each one on its own.
    # Delay and Doppler columns vanish on subcarrier 0 and symbol 0.
    for i in range(12):
        scale = max(torch.linalg.norm(fd[:, i]).item(), torch.linalg.norm(J[:, i]).item(), 1e-300)
        assert torch.linalg.norm(J[:, i] - fd[:, i]).item() / scale < 1e-5
