r"""Experiment configuration: YAML schema, validation and the config hash.

A configuration file describes one experiment.  Every key except
``experiment`` is optional; angles are written in degrees and held in
radians.  The hash of the canonical JSON form of a resolved configuration
names the output directory and is stamped into every output file.
"""

__all__ = ["EXPERIMENTS", "ExperimentConfig", "from_dict", "load_config", "to_dict",
           "canonical_json", "config_hash", "with_overrides", "default_alpha_list"]

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from dataclasses import field

import numpy as np
import yaml

from isacopt.optim.config import AdaptiveLineSearch
from isacopt.optim.config import Constant
from isacopt.optim.config import Diminishing
from isacopt.optim.config import LineSearchParams
from isacopt.optim.config import OptimizerConfig
from isacopt.sampler import PriorStd
from isacopt.sampler import ScenarioSpec
from isacopt.system_model import SystemConfig

EXPERIMENTS = ("convergence", "tradeoff", "gradcheck")

# Length of the hexadecimal config hash.
HASH_LENGTH = 12

_TOP_LEVEL_KEYS = {"experiment", "base_seed", "monte_carlo_runs", "output_dir", "alpha",
                   "system", "grid", "scenario", "optimizer", "convergence", "tradeoff", "gradcheck"}


def default_alpha_list():
    return tuple(float(a) for a in np.linspace(0.0, 1.0, 11))


@dataclass(frozen=True)
class ExperimentConfig:
    r"""Resolved configuration of one experiment.

    Parameters
    ----------
    experiment : str
        ``"convergence"``, ``"tradeoff"`` or ``"gradcheck"``.
    base_seed : int
        Root of every random stream of the experiment.
    monte_carlo_runs : int
        Number of random scenarios per configuration cell.
    output_dir : str
        Parent directory of the experiment's output directory.
    alpha : float
        Trade-off factor of the convergence experiment and the optimizer
        default.
    system : SystemConfig
        Link description.
    grid : tuple
        ``(n_subcarriers, n_symbols)`` of the full resource grid.
    scenario : ScenarioSpec
        Scenario distribution.
    optimizer : OptimizerConfig
        Optimizer settings; ``seed`` and ``samples_per_iter`` are set per
        cell.
    n_list : tuple
        Samples per iteration compared by the convergence experiment.
    alpha_list : tuple
        Trade-off factors swept by the trade-off experiment.
    eval_samples : int
        Size of the evaluation sample set of the trade-off experiment.
    trials : int
        Number of gradient checks.
    h : float
        Finite-difference step of the gradient checks.
    threshold : float
        Largest acceptable relative gradient error.
    perturbation : float
        Offset added to the analytic gradient (negative control only).

    """

    experiment: str
    base_seed: int = 0
    monte_carlo_runs: int = 20
    output_dir: str = "results"
    alpha: float = 0.5
    system: SystemConfig = field(default_factory=SystemConfig)
    grid: tuple = (128, 14)
    scenario: ScenarioSpec = field(default_factory=ScenarioSpec)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    n_list: tuple = (1, 5, 10)
    alpha_list: tuple = field(default_factory=default_alpha_list)
    eval_samples: int = 100
    trials: int = 20
    h: float = 1e-6
    threshold: float = 1e-5
    perturbation: float = 0.0

    def __post_init__(self):

        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}.")
        if int(self.base_seed) != self.base_seed or self.base_seed < 0:
            raise ValueError(f"base_seed must be a non-negative integer, got {self.base_seed}.")
        if int(self.monte_carlo_runs) != self.monte_carlo_runs or self.monte_carlo_runs < 1:
            raise ValueError(f"monte_carlo_runs must be a positive integer, got {self.monte_carlo_runs}.")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}.")

        grid = tuple(int(g) for g in self.grid)
        if len(grid) != 2 or min(grid) < 1:
            raise ValueError(f"grid must be two positive sizes (n_subcarriers, n_symbols), got {self.grid}.")
        object.__setattr__(self, "grid", grid)

        n_list = tuple(int(n) for n in self.n_list)
        if not n_list or min(n_list) < 1:
            raise ValueError(f"convergence.n_list entries must be at least 1, got {list(self.n_list)}.")
        object.__setattr__(self, "n_list", n_list)

        alpha_list = tuple(float(a) for a in self.alpha_list)
        if not alpha_list or any(not 0.0 <= a <= 1.0 for a in alpha_list):
            raise ValueError(f"tradeoff.alpha_list entries must lie in [0, 1], got {list(self.alpha_list)}.")
        object.__setattr__(self, "alpha_list", alpha_list)

        if int(self.eval_samples) != self.eval_samples or self.eval_samples < 1:
            raise ValueError(f"tradeoff.eval_samples must be a positive integer, got {self.eval_samples}.")
        if int(self.trials) != self.trials or self.trials < 0:
            raise ValueError(f"gradcheck.trials must be a non-negative integer, got {self.trials}.")
        if not self.h > 0:
            raise ValueError(f"gradcheck.h must be positive, got {self.h}.")
        if not self.threshold > 0:
            raise ValueError(f"gradcheck.threshold must be positive, got {self.threshold}.")

        object.__setattr__(self, "alpha", float(self.alpha))


def _section(d, name):

    section = d.get(name) or {}
    if not isinstance(section, dict):
        raise ValueError(f"Section {name!r} must be a mapping, got {type(section).__name__}.")
    return dict(section)


def _reject_unknown(section, allowed, name):

    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ValueError(f"Unknown key(s) in {name}: {', '.join(unknown)}.")


def _degrees_to_radians(pair):
    return tuple(math.radians(float(v)) for v in pair)


def _step_rule_from_dict(d):

    d = dict(d)
    kind = d.pop("kind", AdaptiveLineSearch.kind)

    if kind == AdaptiveLineSearch.kind:
        _reject_unknown(d, ("warmup", "damping"), "optimizer.step_rule")
        return AdaptiveLineSearch(**d)
    if kind == Diminishing.kind:
        _reject_unknown(d, ("a", "b"), "optimizer.step_rule")
        return Diminishing(**d)
    if kind == Constant.kind:
        _reject_unknown(d, ("gamma",), "optimizer.step_rule")
        return Constant(**d)

    raise ValueError(f"Unknown optimizer.step_rule.kind {kind!r}.")


def _step_rule_to_dict(rule):

    d = {"kind": rule.kind}
    d.update(dataclasses.asdict(rule))
    return d


def _optimizer_from_dict(d):

    allowed = [f.name for f in dataclasses.fields(OptimizerConfig)]
    _reject_unknown(d, allowed, "optimizer")

    if "step_rule" in d:
        d["step_rule"] = _step_rule_from_dict(d["step_rule"] or {})
    if "linesearch" in d:
        linesearch = dict(d["linesearch"] or {})
        _reject_unknown(linesearch, [f.name for f in dataclasses.fields(LineSearchParams)], "optimizer.linesearch")
        d["linesearch"] = LineSearchParams(**linesearch)

    return OptimizerConfig(**d)


def _scenario_from_dict(d):

    allowed = ("path_count", "distance_range", "speed_range", "angle_range_deg", "two_way_doppler", "prior_std")
    _reject_unknown(d, allowed, "scenario")

    if "angle_range_deg" in d:
        d["angle_range"] = _degrees_to_radians(d.pop("angle_range_deg"))
    if "prior_std" in d:
        prior_std = dict(d["prior_std"] or {})
        _reject_unknown(prior_std, [f.name for f in dataclasses.fields(PriorStd)], "scenario.prior_std")
        d["prior_std"] = PriorStd(**prior_std)

    return ScenarioSpec(**d)


def from_dict(d):
    r"""Builds an :any:`ExperimentConfig` from the parsed YAML document.

    Raises
    ------
    ValueError
        On unknown keys or invalid values; the message names the field.

    """

    if not isinstance(d, dict):
        raise ValueError("A configuration document must be a mapping.")
    _reject_unknown(d, _TOP_LEVEL_KEYS, "configuration")
    if "experiment" not in d:
        raise ValueError("The configuration must name its experiment.")

    kwargs = {k: d[k] for k in ("experiment", "base_seed", "monte_carlo_runs", "output_dir", "alpha") if k in d}

    system = _section(d, "system")
    _reject_unknown(system, [f.name for f in dataclasses.fields(SystemConfig)], "system")
    kwargs["system"] = SystemConfig(**system)

    grid = _section(d, "grid")
    _reject_unknown(grid, ("n_subcarriers", "n_symbols"), "grid")
    kwargs["grid"] = (grid.get("n_subcarriers", 128), grid.get("n_symbols", 14))

    kwargs["scenario"] = _scenario_from_dict(_section(d, "scenario"))
    kwargs["optimizer"] = _optimizer_from_dict(_section(d, "optimizer"))

    convergence = _section(d, "convergence")
    _reject_unknown(convergence, ("n_list",), "convergence")
    if "n_list" in convergence:
        kwargs["n_list"] = tuple(convergence["n_list"])

    tradeoff = _section(d, "tradeoff")
    _reject_unknown(tradeoff, ("alpha_list", "eval_samples"), "tradeoff")
    if "alpha_list" in tradeoff:
        kwargs["alpha_list"] = tuple(tradeoff["alpha_list"])
    if "eval_samples" in tradeoff:
        kwargs["eval_samples"] = tradeoff["eval_samples"]

    gradcheck = _section(d, "gradcheck")
    _reject_unknown(gradcheck, ("trials", "h", "threshold", "perturbation"), "gradcheck")
    kwargs.update(gradcheck)

    return ExperimentConfig(**kwargs)


def load_config(path):

    with open(path, "r", encoding="utf-8") as fh:
        document = yaml.safe_load(fh)

    return from_dict(document)


def to_dict(cfg):
    r"""The configuration as a YAML-schema document (angles in degrees)."""

    scenario = cfg.scenario
    optimizer = cfg.optimizer

    return {
        "experiment": cfg.experiment,
        "base_seed": int(cfg.base_seed),
        "monte_carlo_runs": int(cfg.monte_carlo_runs),
        "output_dir": str(cfg.output_dir),
        "alpha": cfg.alpha,
        "system": dataclasses.asdict(cfg.system),
        "grid": {"n_subcarriers": cfg.grid[0], "n_symbols": cfg.grid[1]},
        "scenario": {
            "path_count": scenario.path_count,
            "distance_range": list(scenario.distance_range),
            "speed_range": list(scenario.speed_range),
            "angle_range_deg": [math.degrees(a) for a in scenario.angle_range],
            "two_way_doppler": scenario.two_way_doppler,
            "prior_std": dataclasses.asdict(scenario.prior_std),
        },
        "optimizer": {
            "method": optimizer.method,
            "max_iters": optimizer.max_iters,
            "samples_per_iter": optimizer.samples_per_iter,
            "grad_tol": optimizer.grad_tol,
            "seed": optimizer.seed,
            "fixed_samples": optimizer.fixed_samples,
            "record_iterates": optimizer.record_iterates,
            "step_rule": _step_rule_to_dict(optimizer.step_rule),
            "linesearch": dataclasses.asdict(optimizer.linesearch),
        },
        "convergence": {"n_list": list(cfg.n_list)},
        "tradeoff": {"alpha_list": list(cfg.alpha_list), "eval_samples": cfg.eval_samples},
        "gradcheck": {"trials": cfg.trials, "h": cfg.h, "threshold": cfg.threshold, "perturbation": cfg.perturbation},
    }


def canonical_json(cfg):

    return json.dumps(to_dict(cfg), sort_keys=True, separators=(",", ":"))


def config_hash(cfg):
    r"""First hexadecimal digits of the SHA-256 of :func:`canonical_json`.

    The output directory does not contribute, so that moving the results
    elsewhere keeps their name.

    """

    d = to_dict(cfg)
    del d["output_dir"]
    content = json.dumps(d, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(content.encode("utf-8")).hexdigest()[:HASH_LENGTH]


def with_overrides(cfg, experiment=None, seed=None, output_dir=None):
    r"""Applies command-line overrides.

    Raises
    ------
    ValueError
        If ``experiment`` contradicts the one named in the configuration.

    """

    changes = {}
    if experiment is not None and experiment != cfg.experiment:
        raise ValueError(f"Configuration describes a {cfg.experiment!r} experiment, not {experiment!r}.")
    if seed is not None:
        changes["base_seed"] = seed
    if output_dir is not None:
        changes["output_dir"] = output_dir

    return dataclasses.replace(cfg, **changes)
