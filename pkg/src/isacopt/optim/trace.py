r"""Per-iteration records of an optimization run."""

__all__ = ["TRACE_COLUMNS", "IterationRecord", "IterationTrace", "format_value"]

import csv
from dataclasses import astuple
from dataclasses import dataclass
from dataclasses import fields

import numpy as np

TRACE_COLUMNS = ("iter", "objective", "grad_norm", "step", "backtracks", "accepted", "seed")


def format_value(x):
    r"""Locale-free text form of a CSV cell; floats round-trip exactly."""

    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


@dataclass(frozen=True)
class IterationRecord:
    r"""State at the start of an iteration and the step taken from it.

    ``objective`` and ``grad_norm`` are evaluated on the iteration's own
    sample set.  ``accepted`` is ``False`` when the line search exhausted
    its backtracks.  ``ms`` is the wall time of the iteration.

    """

    iter: int
    objective: float
    grad_norm: float
    step: float
    backtracks: int
    accepted: bool
    seed: int
    ms: float = 0.0

    def row(self, timing=True):
        values = astuple(self)
        if not timing:
            values = values[:-1]
        return [format_value(v) for v in values]


class IterationTrace:
    r"""Ordered iteration records of one run.

    With iterate recording enabled, ``iterates[t]`` is the point at the start
    of iteration ``t``; a run that exhausts its budget appends the final
    point as well.

    """

    def __init__(self):

        self.records = []
        self.iterates = []
        self.converged = False

    def append(self, record, iterate=None):

        if self.records and record.iter <= self.records[-1].iter:
            raise ValueError(f"Iteration indices must increase, got {record.iter} after {self.records[-1].iter}.")

        self.records.append(record)
        if iterate is not None:
            self.iterates.append(iterate)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def column(self, name):

        if name not in [f.name for f in fields(IterationRecord)]:
            raise KeyError(f"Unknown trace column {name!r}.")
        return np.array([getattr(r, name) for r in self.records])

    @property
    def objectives(self):
        return self.column("objective")

    @property
    def grad_norms(self):
        return self.column("grad_norm")

    def write_csv(self, fh, timing=True):
        r"""Writes the trace with a header row to an open text file."""

        writer = csv.writer(fh, lineterminator="\n")
        header = list(TRACE_COLUMNS) + (["ms"] if timing else [])
        writer.writerow(header)
        for record in self.records:
            writer.writerow(record.row(timing))
