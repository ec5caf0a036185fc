import pytest


def test_diminishing_steps():

    from isacopt.optim.config import Diminishing

    rule = Diminishing(a=2.0, b=3.0)

    assert rule.step(1) == 0.5
    assert rule.step(7) == 0.2


def test_valid_schedule_diagnostics():

    from isacopt.optim.config import Diminishing
    from isacopt.optim.schedule import validate_schedule

    diagnostics = validate_schedule(Diminishing(a=1.0, b=0.0), horizon=1000)

    assert diagnostics.divergent_sum
    assert diagnostics.summable_squares
    # Harmonic and Basel partial sums
    assert diagnostics.partial_sum == pytest.approx(7.485470860550345, rel=1e-12)
    assert diagnostics.partial_sum_squares < 1.6449340668482264


rejected_rule_parametrizations = []

rejected_rule_parametrizations.append(pytest.param("Constant", id="constant"))
rejected_rule_parametrizations.append(pytest.param("AdaptiveLineSearch", id="adaptive"))


@pytest.mark.parametrize("rule_name", rejected_rule_parametrizations)
def test_non_diminishing_rules_rejected(rule_name):

    import isacopt.optim.config as config
    from isacopt.optim.schedule import validate_schedule

    with pytest.raises(ValueError):
        validate_schedule(getattr(config, rule_name)())


def test_invalid_diminishing_parameters():

    from isacopt.optim.config import Constant
    from isacopt.optim.config import Diminishing

    with pytest.raises(ValueError):
        Diminishing(a=0.0)
    with pytest.raises(ValueError):
        Diminishing(a=1.0, b=-1.0)
    with pytest.raises(ValueError):
        Constant(gamma=0.0)


optimizer_error_parametrizations = []

optimizer_error_parametrizations.append(pytest.param(dict(method="adam"), id="unknown-method"))
optimizer_error_parametrizations.append(pytest.param(dict(max_iters=-1), id="negative-iterations"))
optimizer_error_parametrizations.append(pytest.param(dict(samples_per_iter=0), id="no-samples"))
optimizer_error_parametrizations.append(pytest.param(dict(step_rule="fast"), id="unknown-rule"))
optimizer_error_parametrizations.append(pytest.param(dict(grad_tol=-1.0), id="negative-tolerance"))


@pytest.mark.parametrize("kwargs", optimizer_error_parametrizations)
def test_invalid_optimizer_config(kwargs):

    from isacopt.optim.config import OptimizerConfig

    with pytest.raises(ValueError):
        OptimizerConfig(**kwargs)


def test_method_names_are_case_insensitive():

    from isacopt.optim.config import OptimizerConfig

    assert OptimizerConfig(method="SRCG").method == "srcg"
