r"""Result files of an experiment.

``<output_dir>/<experiment>_<hash>/`` receives ``raw_traces.csv``,
``aggregate.csv``, ``plot.svg``, ``config_echo.yaml`` and ``meta.json``.
The CSV files and the plot depend only on the configuration; wall-clock
timings live in ``meta.json`` alone.  Every file carries the configuration
hash.
"""

__all__ = ["output_directory", "write_csv", "read_csv", "write_config_echo", "write_meta", "write_outputs"]

import csv
import json
import logging
import os

import yaml

from isacopt import __version__
from isacopt.experiments.config import to_dict
from isacopt.experiments.plotting import plot_record
from isacopt.optim.trace import format_value

logger = logging.getLogger(__name__)

HASH_PREFIX = "# config_hash="


def output_directory(cfg, record):

    return os.path.join(cfg.output_dir, f"{record.experiment}_{record.config_hash}")


def write_csv(path, config_hash, columns, rows):
    r"""Writes a hash-stamped CSV file.

    The first line is ``# config_hash=<hash>``, followed by the header and
    one line per row.  Floats are written with enough digits to round-trip.

    """

    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"{HASH_PREFIX}{config_hash}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(x) for x in row])


def read_csv(path):
    r"""Reads a file written by :func:`write_csv`.

    Returns
    -------
    ``(config_hash, columns, rows)`` with the rows as lists of strings.

    """

    with open(path, "r", encoding="utf-8", newline="") as fh:
        first = fh.readline().rstrip("\n")
        if not first.startswith(HASH_PREFIX):
            raise ValueError(f"{path} does not start with a config hash line.")
        reader = csv.reader(fh)
        columns = tuple(next(reader))
        rows = [row for row in reader]

    return first[len(HASH_PREFIX):], columns, rows


def write_config_echo(path, cfg, config_hash):

    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{HASH_PREFIX}{config_hash}\n")
        yaml.safe_dump(to_dict(cfg), fh, sort_keys=True, default_flow_style=False)


def write_meta(path, cfg, record):

    meta = {
        "version": __version__,
        "experiment": record.experiment,
        "config_hash": record.config_hash,
        "base_seed": cfg.base_seed,
        "passed": record.passed,
        "exit_code": record.exit_code,
        "failures": [{"cell": list(f.cell), "message": f.message} for f in record.failures],
        "timings": record.timings,
    }

    with open(path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_outputs(cfg, record):
    r"""Writes every result file of ``record``.

    Returns
    -------
    The output directory.

    """

    directory = output_directory(cfg, record)
    os.makedirs(directory, exist_ok=True)

    write_csv(os.path.join(directory, "raw_traces.csv"), record.config_hash, record.raw_columns, record.raw)
    write_csv(os.path.join(directory, "aggregate.csv"), record.config_hash, record.aggregate_columns, record.aggregate)
    plot_record(record, os.path.join(directory, "plot.svg"), threshold=cfg.threshold)
    write_config_echo(os.path.join(directory, "config_echo.yaml"), cfg, record.config_hash)
    write_meta(os.path.join(directory, "meta.json"), cfg, record)

    logger.info("wrote %s results to %s", record.experiment, directory)

    return directory
