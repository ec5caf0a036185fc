r"""Command-line entry point.

Run ``isacopt <experiment> --config <file>``, optionally under
``mpiexec -n K`` to spread the Monte Carlo cells over K processes.  The
exit status is 0 on success, 1 if a run failed and 2 if the gradient check
breached its threshold.
"""

__all__ = ["build_parser", "main"]

import argparse
import logging

import torch
import yaml

from isacopt.backend import backend
from isacopt.experiments.config import EXPERIMENTS
from isacopt.experiments.config import load_config
from isacopt.experiments.config import with_overrides
from isacopt.experiments.harness import EXIT_RUN_FAILURE
from isacopt.experiments.harness import run_experiment
from isacopt.experiments.output import write_outputs
from isacopt.utilities.debug import configure_logging

logger = logging.getLogger(__name__)

_DESCRIPTIONS = {
    "convergence": "Objective and gradient-norm convergence for several sample counts.",
    "tradeoff": "Sensing/communication trade-off over the trade-off factor.",
    "gradcheck": "Analytic gradient against central finite differences.",
}


def _add_common_arguments(parser):

    parser.add_argument("--config", required=True, help="YAML experiment configuration")
    parser.add_argument("--seed", type=int, default=None, help="override base_seed")
    parser.add_argument("--out", default=None, help="override output_dir")
    parser.add_argument("--threads", type=int, default=None, help="torch threads per process")
    parser.add_argument("--log-level", default="INFO", help="logging level (default: INFO)")


def build_parser():

    parser = argparse.ArgumentParser(prog="isacopt", description="ISAC precoder optimization experiments.")
    subparsers = parser.add_subparsers(dest="experiment", metavar="experiment")
    subparsers.required = True

    for name in EXPERIMENTS:
        _add_common_arguments(subparsers.add_parser(name, help=_DESCRIPTIONS[name], description=_DESCRIPTIONS[name]))

    return parser


def main(argv=None):

    parser = build_parser()
    args = parser.parse_args(argv)

    if args.threads is not None and args.threads < 1:
        parser.error(f"--threads must be positive, got {args.threads}")
    if args.seed is not None and args.seed < 0:
        parser.error(f"--seed must be non-negative, got {args.seed}")

    partition = backend.Partition.world()

    try:
        configure_logging(args.log_level, rank=partition.rank)
    except ValueError as e:
        parser.error(str(e))

    if args.threads is not None:
        torch.set_num_threads(args.threads)

    try:
        cfg = with_overrides(load_config(args.config), experiment=args.experiment,
                             seed=args.seed, output_dir=args.out)
    except (OSError, ValueError, yaml.YAMLError) as e:
        logger.error("invalid configuration %s: %s", args.config, e)
        return EXIT_RUN_FAILURE

    record = run_experiment(cfg, partition)

    status = None
    if partition.is_root:
        write_outputs(cfg, record)
        status = record.exit_code

    return partition.broadcast_from_root(status)
