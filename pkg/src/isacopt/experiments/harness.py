r"""Monte Carlo driver of the convergence, trade-off and gradient-check experiments.

An experiment is a list of independent cells (one scenario at one setting).
Every cell derives its random streams from the base seed and its own
indices, so cells can run in any order on any worker.  The cells are split
over the workers of a partition and the results gathered on the root, which
sorts them by cell index and aggregates.  A single process is the
one-worker partition.
"""

__all__ = ["RunRecord", "CellFailure", "run_convergence", "run_tradeoff", "run_gradcheck", "run_experiment",
           "CONVERGENCE_RAW_COLUMNS", "CONVERGENCE_AGGREGATE_COLUMNS",
           "TRADEOFF_RAW_COLUMNS", "TRADEOFF_AGGREGATE_COLUMNS",
           "GRADCHECK_RAW_COLUMNS", "GRADCHECK_AGGREGATE_COLUMNS", "GRADCHECK_ALPHAS"]

import dataclasses
import logging
import time
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from isacopt.backend import backend
from isacopt.bfim import ObjectiveConfig
from isacopt.bfim import SampledObjective
from isacopt.experiments.config import config_hash
from isacopt.gradient import gradient_report
from isacopt.manifold import random_point
from isacopt.optim.srgd import run
from isacopt.sampler import default_weight_matrix
from isacopt.sampler import prior_spec
from isacopt.sampler import sample_from_prior
from isacopt.sampler import sample_scenario
from isacopt.system_model import resource_grid
from isacopt.utilities import seeding

logger = logging.getLogger(__name__)

CONVERGENCE_RAW_COLUMNS = ("n_samples", "run", "iter", "objective", "grad_norm", "step", "backtracks", "accepted", "seed")
CONVERGENCE_AGGREGATE_COLUMNS = ("n_samples", "iter", "neg_objective_mean", "neg_objective_std",
                                 "grad_norm_mean", "grad_norm_std", "runs")

TRADEOFF_RAW_COLUMNS = ("alpha", "run", "iters", "objective", "sensing", "comm")
TRADEOFF_AGGREGATE_COLUMNS = ("alpha", "sensing_mean", "sensing_std", "comm_mean", "comm_std", "runs")

GRADCHECK_RAW_COLUMNS = ("trial", "alpha", "rel_error")
GRADCHECK_AGGREGATE_COLUMNS = ("trials", "max_rel_error", "median_rel_error", "threshold", "passed")

# Trade-off factors cycled through by the gradient checks.
GRADCHECK_ALPHAS = (0.0, 0.5, 1.0)

EXIT_SUCCESS = 0
EXIT_RUN_FAILURE = 1
EXIT_THRESHOLD = 2


@dataclass(frozen=True)
class CellFailure:

    cell: tuple
    message: str


@dataclass
class RunRecord:
    r"""Everything an experiment produces.

    Attributes
    ----------
    experiment : str
        Experiment name.
    config_hash : str
        Hash of the resolved configuration.
    raw_columns, aggregate_columns : tuple
        CSV headers.
    raw : list
        Rows of per-run results, sorted by cell.
    aggregate : list
        Rows of statistics over runs, recomputable from ``raw``.
    failures : list
        :any:`CellFailure` of every cell that did not complete.
    passed : bool
        Acceptance verdict; only the gradient check can fail it.
    timings : dict
        Wall-clock seconds, kept out of the CSV files.

    """

    experiment: str
    config_hash: str
    raw_columns: tuple
    aggregate_columns: tuple
    raw: list = field(default_factory=list)
    aggregate: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    passed: bool = True
    timings: dict = field(default_factory=dict)

    @property
    def exit_code(self):

        if self.failures:
            return EXIT_RUN_FAILURE
        if not self.passed:
            return EXIT_THRESHOLD
        return EXIT_SUCCESS


def _mean_std(values):

    values = np.asarray(values, dtype=np.float64)
    return float(np.mean(values)), float(np.std(values))


def _objective_config(cfg, run_index, alpha):
    r"""Ground truth, prior and objective configuration of scenario ``run_index``."""

    truth = sample_scenario(cfg.scenario, cfg.system,
                            seeding.derive_rng(cfg.base_seed, seeding.SCENARIO, run_index))
    prior = prior_spec(truth, cfg.scenario)
    weights = default_weight_matrix(truth.n_paths, cfg.system.subcarrier_spacing)
    grid = resource_grid(*cfg.grid)

    return ObjectiveConfig(alpha, cfg.system, prior, weights, grid)


def _initial_point(cfg, run_index):

    dims = (cfg.system.n_tx, cfg.system.n_streams)
    return random_point(dims, cfg.system.power_budget,
                        seeding.derive_rng(cfg.base_seed, seeding.INITIAL_POINT, run_index))


def _optimize(cfg, run_index, alpha, n_samples):

    oc = _objective_config(cfg, run_index, alpha)
    opt = dataclasses.replace(cfg.optimizer, samples_per_iter=n_samples,
                              seed=seeding.derive_seed(cfg.base_seed, seeding.PRIOR, run_index))
    w, trace = run(oc, opt, _initial_point(cfg, run_index))
    return oc, w, trace


def _convergence_cell(cfg, cell):

    n_index, run_index = cell
    n_samples = cfg.n_list[n_index]
    _, _, trace = _optimize(cfg, run_index, cfg.alpha, n_samples)

    return [(n_samples, run_index) + tuple(getattr(r, c) for c in CONVERGENCE_RAW_COLUMNS[2:]) for r in trace]


def _tradeoff_cell(cfg, cell):

    alpha_index, run_index = cell
    alpha = cfg.alpha_list[alpha_index]
    oc, w, trace = _optimize(cfg, run_index, alpha, cfg.optimizer.samples_per_iter)

    # Every alpha of one scenario is scored on the same samples.
    samples = sample_from_prior(oc.prior, cfg.eval_samples,
                                seeding.derive_seed(cfg.base_seed, seeding.EVALUATION, run_index))
    objective = SampledObjective(oc, samples)

    return [(alpha, run_index, len(trace), objective.value(w), objective.sensing(w), objective.comm(w))]


def _gradcheck_cell(cfg, cell):

    (trial,) = cell
    alpha = GRADCHECK_ALPHAS[trial % len(GRADCHECK_ALPHAS)]
    rng = seeding.derive_rng(cfg.base_seed, seeding.GRADCHECK, trial)

    truth = sample_scenario(cfg.scenario, cfg.system, rng)
    prior = prior_spec(truth, cfg.scenario)
    oc = ObjectiveConfig(alpha, cfg.system, prior,
                         default_weight_matrix(truth.n_paths, cfg.system.subcarrier_spacing),
                         resource_grid(*cfg.grid))
    w = random_point((cfg.system.n_tx, cfg.system.n_streams), cfg.system.power_budget, rng)
    samples = sample_from_prior(prior, cfg.optimizer.samples_per_iter, rng)

    report = gradient_report(w, samples, oc, h=cfg.h, perturbation=cfg.perturbation)
    return [(trial, alpha, report.rel_error)]


def _run_cells(cfg, cells, cell_function, partition):
    r"""Runs the cells owned by this worker and gathers everything on the root.

    Returns
    -------
    ``(rows, failures)`` sorted by cell on the root, ``(None, None)``
    elsewhere.

    """

    results = []
    for i in partition.work_range(len(cells)):
        cell = cells[i]
        start = time.perf_counter()
        try:
            rows = cell_function(cfg, cell)
        except (ValueError, RuntimeError) as e:
            logger.warning("%s cell %s failed: %s", cfg.experiment, cell, e)
            results.append((i, None, CellFailure(cell, str(e))))
            continue
        logger.info("%s cell %s done in %.2f s", cfg.experiment, cell, time.perf_counter() - start)
        results.append((i, rows, None))

    gathered = partition.gather_to_root(results)
    if gathered is None:
        return None, None

    gathered.sort(key=lambda item: item[0])
    rows = [row for _, cell_rows, _ in gathered if cell_rows is not None for row in cell_rows]
    failures = [failure for _, _, failure in gathered if failure is not None]
    return rows, failures


def _world_partition(partition):
    return partition if partition is not None else backend.Partition.world()


def convergence_aggregate(raw):
    r"""Per ``(n_samples, iter)`` statistics of :math:`-\hat f` and the gradient norm."""

    groups = {}
    for row in raw:
        n_samples, _, it, objective, grad_norm = row[:5]
        groups.setdefault((n_samples, it), []).append((-objective, grad_norm))

    aggregate = []
    for (n_samples, it) in sorted(groups):
        values = np.asarray(groups[(n_samples, it)], dtype=np.float64)
        neg_mean, neg_std = _mean_std(values[:, 0])
        grad_mean, grad_std = _mean_std(values[:, 1])
        aggregate.append((n_samples, it, neg_mean, neg_std, grad_mean, grad_std, len(values)))

    return aggregate


def tradeoff_aggregate(raw):

    groups = {}
    for alpha, _, _, _, sensing, comm in raw:
        groups.setdefault(alpha, []).append((sensing, comm))

    aggregate = []
    for alpha in sorted(groups):
        values = np.asarray(groups[alpha], dtype=np.float64)
        aggregate.append((alpha,) + _mean_std(values[:, 0]) + _mean_std(values[:, 1]) + (len(values),))

    return aggregate


def gradcheck_aggregate(raw, threshold):

    if not raw:
        return [], True

    errors = np.asarray([row[2] for row in raw], dtype=np.float64)
    max_error = float(np.max(errors))
    passed = bool(max_error <= threshold)
    return [(len(errors), max_error, float(np.median(errors)), threshold, passed)], passed


def _execute(cfg, cells, cell_function, raw_columns, aggregate_columns, partition):

    partition = _world_partition(partition)
    start = time.perf_counter()
    raw, failures = _run_cells(cfg, cells, cell_function, partition)
    if raw is None:
        return None

    record = RunRecord(cfg.experiment, config_hash(cfg), raw_columns, aggregate_columns, raw=raw, failures=failures)
    record.timings = {"wall_seconds": time.perf_counter() - start, "workers": partition.size, "cells": len(cells)}

    if failures:
        logger.warning("%d of %d %s cells failed", len(failures), len(cells), cfg.experiment)

    return record


def run_convergence(cfg, partition=None):
    r"""Objective and gradient-norm histories for every sample count in ``n_list``.

    Run ``r`` uses the same scenario and initial point for every sample
    count, so the curves differ only by the number of samples per iteration.

    Returns
    -------
    The :any:`RunRecord` on the root worker, ``None`` elsewhere.

    """

    if cfg.experiment != "convergence":
        raise ValueError(f"Expected a convergence configuration, got {cfg.experiment!r}.")

    cells = [(i, r) for i in range(len(cfg.n_list)) for r in range(cfg.monte_carlo_runs)]
    record = _execute(cfg, cells, _convergence_cell,
                      CONVERGENCE_RAW_COLUMNS, CONVERGENCE_AGGREGATE_COLUMNS, partition)
    if record is not None:
        record.aggregate = convergence_aggregate(record.raw)
    return record


def run_tradeoff(cfg, partition=None):
    r"""Sensing and communication terms of the optimized precoders across ``alpha_list``.

    Returns
    -------
    The :any:`RunRecord` on the root worker, ``None`` elsewhere.

    """

    if cfg.experiment != "tradeoff":
        raise ValueError(f"Expected a tradeoff configuration, got {cfg.experiment!r}.")

    cells = [(i, r) for i in range(len(cfg.alpha_list)) for r in range(cfg.monte_carlo_runs)]
    record = _execute(cfg, cells, _tradeoff_cell, TRADEOFF_RAW_COLUMNS, TRADEOFF_AGGREGATE_COLUMNS, partition)
    if record is not None:
        record.aggregate = tradeoff_aggregate(record.raw)
    return record


def run_gradcheck(cfg, partition=None):
    r"""Relative errors of the analytic gradient against finite differences.

    The record fails its acceptance verdict when the largest relative error
    exceeds ``cfg.threshold``.

    Returns
    -------
    The :any:`RunRecord` on the root worker, ``None`` elsewhere.

    """

    if cfg.experiment != "gradcheck":
        raise ValueError(f"Expected a gradcheck configuration, got {cfg.experiment!r}.")

    cells = [(t,) for t in range(cfg.trials)]
    record = _execute(cfg, cells, _gradcheck_cell, GRADCHECK_RAW_COLUMNS, GRADCHECK_AGGREGATE_COLUMNS, partition)
    if record is not None:
        record.aggregate, record.passed = gradcheck_aggregate(record.raw, cfg.threshold)
        if not record.passed:
            logger.warning("gradient check failed: max relative error %.3g > %.3g",
                           record.aggregate[0][1], cfg.threshold)
    return record


_RUNNERS = {
    "convergence": run_convergence,
    "tradeoff": run_tradeoff,
    "gradcheck": run_gradcheck,
}


def run_experiment(cfg, partition=None):

    return _RUNNERS[cfg.experiment](cfg, partition)
