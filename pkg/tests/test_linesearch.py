import math

import pytest
import torch


def test_backtracking_accepts_first_sufficient_increase():

    from isacopt.optim.config import LineSearchParams
    from isacopt.optim.linesearch import backtracking_line_search

    # phi(s) = -(s - 1)^2 with phi(0) = -1 and phi'(0) = 2
    result = backtracking_line_search(lambda s: -(s - 1.0)**2, -1.0, 2.0, 4.0, LineSearchParams())

    assert result.accepted
    assert result.step == 1.0
    assert result.backtracks == 2
    assert result.value == 0.0


def test_exhausted_search_returns_best_trial():

    from isacopt.optim.config import LineSearchParams
    from isacopt.optim.linesearch import backtracking_line_search

    # A descent direction passed off as an ascent direction never satisfies the test
    params = LineSearchParams(max_backtracks=3)
    result = backtracking_line_search(lambda s: -s, 0.0, 1.0, 1.0, params)

    assert not result.accepted
    assert result.backtracks == 3
    assert result.step == 0.125
    assert result.value == -0.125


def test_adaptive_initial_step():

    from isacopt.optim.config import LineSearchParams
    from isacopt.optim.linesearch import AdaptiveStep
    from isacopt.optim.linesearch import LineSearchResult

    adaptive = AdaptiveStep(LineSearchParams(growth=2.0))
    assert adaptive.initial_step() is None

    adaptive.update(LineSearchResult(0.5, 1.0, 0, True))
    assert adaptive.initial_step() == 1.0

    adaptive.update(LineSearchResult(0.25, 1.0, 2, True))
    assert adaptive.initial_step() == 0.25

    adaptive.update(LineSearchResult(0.125, 1.0, 25, False))
    assert adaptive.initial_step() == 0.125


def test_manifold_line_search_increases_linear_objective():

    import numpy as np

    from isacopt.manifold import inner
    from isacopt.manifold import project_tangent
    from isacopt.manifold import random_point
    from isacopt.optim.config import LineSearchParams
    from isacopt.optim.linesearch import line_search
    from isacopt.utilities.seeding import complex_normal

    w = random_point((4, 2), 2.0, seed=0)
    A = complex_normal(np.random.default_rng(1), (4, 2))

    # f(W) = Re tr(W^H A) has Wirtinger gradient A / 2
    def f(x):
        return inner(x, A)

    grad = project_tangent(w, 0.5 * A)
    slope = 2.0 * inner(grad, grad)
    params = LineSearchParams()

    result = line_search(w, grad, f(w), f, params, slope)

    assert result.accepted
    assert result.value > f(w)
    assert result.point.on_manifold
    assert result.value == f(result.point)
    assert result.step <= params.initial_step * math.sqrt(w.power) / grad.norm()


linesearch_error_parametrizations = []

linesearch_error_parametrizations.append(pytest.param(dict(initial_step=0.0), id="zero-step"))
linesearch_error_parametrizations.append(pytest.param(dict(contraction=1.0), id="no-contraction"))
linesearch_error_parametrizations.append(pytest.param(dict(sufficient_increase=0.0), id="zero-armijo"))
linesearch_error_parametrizations.append(pytest.param(dict(max_backtracks=-1), id="negative-budget"))
linesearch_error_parametrizations.append(pytest.param(dict(growth=0.5), id="shrinking-growth"))


@pytest.mark.parametrize("kwargs", linesearch_error_parametrizations)
def test_invalid_linesearch_params(kwargs):

    from isacopt.optim.config import LineSearchParams

    with pytest.raises(ValueError):
        LineSearchParams(**kwargs)


def test_tangent_direction_is_unchanged_by_search():

    from isacopt.manifold import project_tangent
    from isacopt.manifold import random_point
    from isacopt.optim.config import LineSearchParams
    from isacopt.optim.linesearch import line_search

    w = random_point((3, 2), 1.0, seed=2)
    d = project_tangent(w, torch.ones(3, 2, dtype=torch.complex128))
    before = d.mat.clone()

    line_search(w, d, 0.0, lambda x: 0.0, LineSearchParams(max_backtracks=2), 1.0)

    assert torch.equal(d.mat, before)


def test_zero_direction_takes_no_step():

    from isacopt.manifold import TangentVector
    from isacopt.manifold import random_point
    from isacopt.optim.config import LineSearchParams
    from isacopt.optim.linesearch import AdaptiveStep
    from isacopt.optim.linesearch import line_search

    w = random_point((3, 2), 1.0, seed=4)
    zero = TangentVector(torch.zeros(3, 2, dtype=torch.complex128), w)

    result = line_search(w, zero, 1.5, lambda x: 0.0, LineSearchParams(), 0.0)

    assert result.step == 0.0
    assert result.value == 1.5
    assert not result.accepted
    assert result.point is w

    adaptive = AdaptiveStep(LineSearchParams())
    adaptive.update(line_search(w, zero, 1.5, lambda x: 0.0, LineSearchParams(), 0.0, initial_step=0.5))
    assert adaptive.initial_step() is None


def test_damping_factor():

    from isacopt.optim.config import AdaptiveLineSearch

    rule = AdaptiveLineSearch(warmup=3)

    assert [rule.damping_factor(t) for t in range(6)] == [1.0, 1.0, 1.0, 1.0, 0.5, 1.0 / 3.0]
    assert AdaptiveLineSearch(damping=False).damping_factor(1000) == 1.0

    with pytest.raises(ValueError):
        AdaptiveLineSearch(warmup=-1)
