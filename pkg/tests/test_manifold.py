import numpy as np
import pytest
import torch
from adjoint_test import check_adjoint_test_tight_sequential

manifold_parametrizations = []

manifold_parametrizations.append(pytest.param((4, 2), 1.0, id="small-unit-power"))
manifold_parametrizations.append(pytest.param((8, 3), 2.5, id="full-scale-dims"))
manifold_parametrizations.append(pytest.param((5, 1), 0.1, id="single-stream"))


def _ambient(dims, seed):

    from isacopt.utilities.seeding import complex_normal

    return complex_normal(np.random.default_rng(seed), dims)


@pytest.mark.parametrize("dims, power", manifold_parametrizations)
def test_random_point_is_feasible(dims, power):

    from isacopt.manifold import random_point

    w = random_point(dims, power, seed=0)

    assert w.shape == dims
    assert w.on_manifold
    assert abs(w.trace_power - power) <= 1e-10 * power


@pytest.mark.parametrize("dims, power", manifold_parametrizations)
def test_projection_properties(dims, power):

    from isacopt.manifold import inner
    from isacopt.manifold import project_tangent
    from isacopt.manifold import random_point
    from isacopt.manifold import tangency_residual

    w = random_point(dims, power, seed=1)
    V = _ambient(dims, 2)

    pv = project_tangent(w, V)

    # Idempotent
    assert torch.linalg.norm(project_tangent(w, pv).mat - pv.mat).item() < 1e-12 * torch.linalg.norm(V).item()
    # Orthogonal to the normal direction W
    assert tangency_residual(pv) < 1e-12
    assert abs(inner(w, V - pv.mat)) == pytest.approx(abs(inner(w, V)), rel=1e-12)


@pytest.mark.parametrize("dims, power", manifold_parametrizations)
def test_projection_is_self_adjoint(dims, power):

    from isacopt.manifold import project_tangent
    from isacopt.manifold import random_point

    w = random_point(dims, power, seed=3)
    x1 = _ambient(dims, 4)
    y2 = _ambient(dims, 5)

    y1 = project_tangent(w, x1).mat
    x2 = project_tangent(w, y2).mat

    check_adjoint_test_tight_sequential(x1, x2, y1, y2)


@pytest.mark.parametrize("dims, power", manifold_parametrizations)
def test_retraction_is_feasible(dims, power):

    from isacopt.manifold import project_tangent
    from isacopt.manifold import random_point
    from isacopt.manifold import retract

    w = random_point(dims, power, seed=6)
    v = project_tangent(w, _ambient(dims, 7))

    for step in (0.0, 1e-3, 0.5, 10.0, 1e4):
        assert abs(retract(w, v, step).trace_power - power) <= 1e-10 * power


@pytest.mark.parametrize("dims, power", manifold_parametrizations)
def test_retraction_is_first_order(dims, power):

    from isacopt.manifold import project_tangent
    from isacopt.manifold import random_point
    from isacopt.manifold import retract

    w = random_point(dims, power, seed=8)
    v = project_tangent(w, _ambient(dims, 9))

    def deviation(t):
        return torch.linalg.norm(retract(w, v, t).mat - (w.mat + t * v.mat)).item()

    # R(W, tV) = W + tV + O(t^2)
    assert deviation(1e-3) < 1e-3
    assert deviation(1e-4) < 2e-2 * deviation(1e-3)


def test_retraction_through_origin_raises():

    from isacopt.manifold import TangentVector
    from isacopt.manifold import random_point
    from isacopt.manifold import retract

    w = random_point((3, 2), 1.0, seed=10)

    with pytest.raises(ValueError):
        retract(w, TangentVector(-w.mat, w), 1.0)


def test_tangent_vectors_at_different_points_do_not_add():

    from isacopt.manifold import project_tangent
    from isacopt.manifold import random_point

    w1 = random_point((3, 2), 1.0, seed=11)
    w2 = random_point((3, 2), 1.0, seed=12)
    V = _ambient((3, 2), 13)

    u = project_tangent(w1, V)

    assert torch.allclose((u + 2.0 * u).mat, 3.0 * u.mat)
    assert torch.allclose((-u).mat, -u.mat)
    with pytest.raises(ValueError):
        u + project_tangent(w2, V)


def test_transport_lands_in_new_tangent_space():

    from isacopt.manifold import project_tangent
    from isacopt.manifold import random_point
    from isacopt.manifold import tangency_residual
    from isacopt.manifold import transport

    w1 = random_point((4, 2), 1.0, seed=14)
    w2 = random_point((4, 2), 1.0, seed=15)
    u = project_tangent(w1, _ambient((4, 2), 16))

    moved = transport(w1, w2, u)

    assert moved.base is w2
    assert tangency_residual(moved) < 1e-12
    assert torch.equal(transport(w1, w1, u).mat, u.mat)


def test_riemannian_gradient_vanishes_for_radial_gradient():

    from isacopt.manifold import random_point
    from isacopt.manifold import riemannian_gradient

    w = random_point((4, 2), 1.0, seed=17)

    assert riemannian_gradient(w, 3.0 * w.mat).norm() < 1e-14


def test_invalid_precoders():

    from isacopt.manifold import Precoder

    with pytest.raises(ValueError):
        Precoder(torch.zeros(4, dtype=torch.complex128))
    with pytest.raises(ValueError):
        Precoder(torch.zeros(4, 2, dtype=torch.complex128), power=0.0)
    assert not Precoder(torch.ones(4, 2, dtype=torch.complex128), power=1.0).on_manifold
