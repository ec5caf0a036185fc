import io

import pytest


def _record(it, **kwargs):

    from isacopt.optim.trace import IterationRecord

    values = dict(objective=1.5, grad_norm=0.25, step=1.0, backtracks=0, accepted=True, seed=42, ms=3.0)
    values.update(kwargs)
    return IterationRecord(it, **values)


def test_trace_csv_layout():

    from isacopt.optim.trace import IterationTrace

    trace = IterationTrace()
    trace.append(_record(0))
    trace.append(_record(1, objective=2.0, accepted=False, backtracks=25))

    with_timing = io.StringIO()
    trace.write_csv(with_timing)
    without_timing = io.StringIO()
    trace.write_csv(without_timing, timing=False)

    assert with_timing.getvalue().splitlines() == [
        "iter,objective,grad_norm,step,backtracks,accepted,seed,ms",
        "0,1.5,0.25,1,0,1,42,3",
        "1,2,0.25,1,25,0,42,3",
    ]
    assert without_timing.getvalue().splitlines()[0] == "iter,objective,grad_norm,step,backtracks,accepted,seed"
    assert without_timing.getvalue().splitlines()[1] == "0,1.5,0.25,1,0,1,42"


def test_floats_round_trip():

    from isacopt.optim.trace import format_value

    for x in (0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789):
        assert float(format_value(x)) == x


def test_trace_columns():

    from isacopt.optim.trace import IterationTrace

    trace = IterationTrace()
    for it in range(3):
        trace.append(_record(it, objective=float(it)))

    assert len(trace) == 3
    assert list(trace.objectives) == [0.0, 1.0, 2.0]
    assert list(trace.column("iter")) == [0, 1, 2]
    assert trace[-1].iter == 2
    with pytest.raises(KeyError):
        trace.column("loss")


def test_iterations_must_increase():

    from isacopt.optim.trace import IterationTrace

    trace = IterationTrace()
    trace.append(_record(3))

    with pytest.raises(ValueError):
        trace.append(_record(3))
