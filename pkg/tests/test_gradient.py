import numpy as np
import pytest
import torch
from instances import small_objective
from instances import small_precoder
from instances import small_samples

gradient_parametrizations = []

for alpha in (0.0, 0.5, 1.0):
    for seed in range(7):
        gradient_parametrizations.append(pytest.param(alpha, seed, id=f"alpha-{alpha}-seed-{seed}"))


@pytest.mark.parametrize("alpha, seed", gradient_parametrizations)
def test_gradient_matches_finite_differences(alpha, seed):

    from isacopt.gradient import gradient_report

    oc = small_objective(alpha=alpha, seed=seed)
    ss = small_samples(oc, n=4, seed=seed + 10)
    w = small_precoder(oc, seed=seed + 20)

    report = gradient_report(w, ss, oc)

    assert report.analytic.shape == (oc.system.n_tx, oc.system.n_streams)
    assert report.rel_error < 1e-6


def test_perturbed_gradient_fails_check():

    from isacopt.gradient import gradient_report

    oc = small_objective(alpha=0.5, seed=0)
    ss = small_samples(oc, n=4, seed=1)
    w = small_precoder(oc)

    report = gradient_report(w, ss, oc, perturbation=1e-3)

    assert report.rel_error > 1e-5


def test_gradient_is_wirtinger_derivative():

    from isacopt.gradient import fd_gradient

    W = torch.tensor([[1.0 + 2.0j, -0.5j], [0.25, 3.0 - 1.0j]], dtype=torch.complex128)

    # d ||W||^2 / d conj(W) = W
    G = fd_gradient(W, lambda X: torch.sum(torch.abs(X)**2).item())

    assert torch.allclose(G, W, atol=1e-8)


def test_gradient_predicts_first_order_change():

    from isacopt.bfim import SampledObjective
    from isacopt.gradient import euclidean_gradient
    from isacopt.utilities.seeding import complex_normal

    oc = small_objective(alpha=0.5, seed=3)
    ss = small_samples(oc, n=4, seed=4)
    W = small_precoder(oc).mat
    D = complex_normal(np.random.default_rng(5), tuple(W.shape))

    G = euclidean_gradient(W, ss, oc)
    f = SampledObjective(oc, ss)

    t = 1e-6
    change = (f(W + t * D) - f(W - t * D)) / (2.0 * t)

    assert change == pytest.approx(2.0 * torch.sum(G.conj() * D).real.item(), rel=1e-5)


def test_nonpositive_step_rejected():

    from isacopt.gradient import fd_gradient

    with pytest.raises(ValueError):
        fd_gradient(torch.eye(2, dtype=torch.complex128), lambda X: 0.0, h=0.0)


def test_relative_error_of_zero_reference():

    from isacopt.gradient import relative_error

    zero = torch.zeros(2, 2, dtype=torch.complex128)

    assert relative_error(zero, zero) == 0.0


def test_gradient_is_conjugate_equivariant():

    from isacopt.bfim import SampledObjective
    from isacopt.gradient import fd_gradient
    from isacopt.gradient import relative_error

    oc = small_objective(alpha=0.5, seed=5)
    ss = small_samples(oc, n=4, seed=6)
    W = small_precoder(oc, seed=7).mat
    objective = SampledObjective(oc, ss)

    # g(W) = f(conj(W)) has gradient conj(grad f(conj(W))) at W
    G = fd_gradient(W, lambda X: objective.value(X.conj()))

    assert relative_error(G, objective.gradient(W.conj()).conj()) < 1e-6


def test_finite_difference_error_is_second_order():

    from isacopt.gradient import euclidean_gradient
    from isacopt.gradient import fd_gradient
    from isacopt.gradient import relative_error

    oc = small_objective(alpha=0.5, seed=8)
    ss = small_samples(oc, n=4, seed=9)
    w = small_precoder(oc, seed=10)

    analytic = euclidean_gradient(w, ss, oc)
    steps = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
    errors = [relative_error(fd_gradient(w, ss, oc, h=h), analytic) for h in steps]

    # Truncation error drops 100x per decade while it dominates rounding
    assert errors[0] / errors[1] > 30.0
    for coarse, fine in zip(errors[1:-1], errors[2:]):
        if fine > 1e-7:
            assert coarse / fine > 30.0

    assert all(e < 1e-6 for e in errors[2:])
