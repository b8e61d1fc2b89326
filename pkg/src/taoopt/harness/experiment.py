"""Multi-trial experiments with reproducible per-trial seeds."""

from __future__ import annotations

import dataclasses
import logging
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np

from ..benchmarks import BENCHMARKS
from ..core import (
    BoundedProblem,
    ConfigurationError,
    RandomSource,
    RunRecord,
    StatsSummary,
    mix_seed,
    summarize,
)
from ..problems import build_problem, fishery_model, problem_ids
from ..pso import PsoParams, pso_run
from ..tao import TaoParams, tao_run
from . import report

log = logging.getLogger(__name__)

ALGORITHMS = ("tao", "pso")
DEFAULT_SEED = 20240417

# (n_trials, population_size, max_iterations) per problem family
BENCHMARK_PROTOCOL = (50, 100, 500)
FISHERY_PROTOCOL = (100, 50, 100)
DESIGN_PROTOCOL = (20, 100, 500)
PROTOCOLS = {
    **{bid: BENCHMARK_PROTOCOL for bid in BENCHMARKS},
    "rosenbrock-constrained": DESIGN_PROTOCOL,
    "cantilever": (20, 100, 300),
    "pressure-vessel": DESIGN_PROTOCOL,
    "spring": DESIGN_PROTOCOL,
    "fishery": FISHERY_PROTOCOL,
}

_ALIASES = {"r": "r_dir"}
_RUN_SIZE_KEYS = ("population_size", "max_iterations")
TAO_KEYS = tuple(f.name for f in dataclasses.fields(TaoParams) if f.name not in _RUN_SIZE_KEYS)
PSO_KEYS = tuple(f.name for f in dataclasses.fields(PsoParams) if f.name not in _RUN_SIZE_KEYS)


@dataclass
class ExperimentConfig:
    """One algorithm on one problem; ``None`` sizes fall back to the problem's protocol."""

    algorithm: str = "tao"
    problem_id: str = "F1"
    n_trials: Optional[int] = None
    population_size: Optional[int] = None
    max_iterations: Optional[int] = None
    master_seed: int = DEFAULT_SEED
    parameter_overrides: Mapping[str, Any] = field(default_factory=dict)
    output_directory: Optional[Path] = None
    svg: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(
                f"unknown algorithm {self.algorithm!r}; valid: {', '.join(ALGORITHMS)}"
            )
        if self.problem_id not in PROTOCOLS:
            raise ConfigurationError(
                f"unknown problem {self.problem_id!r}; valid ids: {', '.join(problem_ids())}"
            )
        trials, pop, iters = PROTOCOLS[self.problem_id]
        self.n_trials = trials if self.n_trials is None else int(self.n_trials)
        self.population_size = pop if self.population_size is None else int(self.population_size)
        self.max_iterations = iters if self.max_iterations is None else int(self.max_iterations)
        if self.n_trials < 1:
            raise ConfigurationError(f"need at least one trial, got {self.n_trials}")
        if self.output_directory is not None:
            self.output_directory = Path(self.output_directory)

    @property
    def tag(self) -> str:
        return f"{self.problem_id}_{self.algorithm}"


def _number(value: Any, key: str):
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            raise ConfigurationError(f"{key} expects a number, got {value!r}") from None
    return value


def split_overrides(algorithm: str, overrides: Mapping[str, Any]):
    """Partition ``key=value`` overrides into algorithm and problem settings."""
    own_keys = TAO_KEYS if algorithm == "tao" else PSO_KEYS
    other_keys = PSO_KEYS if algorithm == "tao" else TAO_KEYS
    algo, problem = {}, {}
    for key, value in overrides.items():
        key = _ALIASES.get(key, key) if algorithm == "tao" else key
        if key in own_keys:
            algo[key] = value if key == "boundary" else _number(value, key)
        elif key in other_keys:
            raise ConfigurationError(f"parameter {key!r} does not apply to {algorithm}")
        else:
            problem[key] = value
    return algo, problem


def make_params(cfg: ExperimentConfig, algo_overrides: Mapping[str, Any]):
    sizes = dict(population_size=cfg.population_size, max_iterations=cfg.max_iterations)
    try:
        if cfg.algorithm == "tao":
            return TaoParams(**sizes, **algo_overrides)
        return PsoParams(**sizes, **algo_overrides)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None


def prepare(cfg: ExperimentConfig):
    """Resolve the problem and algorithm parameters for ``cfg``."""
    algo, opts = split_overrides(cfg.algorithm, cfg.parameter_overrides)
    problem = build_problem(cfg.problem_id, opts)
    return problem, make_params(cfg, algo), opts


def trial_seed(master_seed: int, trial: int) -> int:
    return mix_seed(master_seed, trial)


def run_trial(problem: BoundedProblem, algorithm: str, params, master_seed: int,
              trial: int) -> RunRecord:
    rng = RandomSource(trial_seed(master_seed, trial))
    if algorithm == "tao":
        return tao_run(problem, params, rng)
    return pso_run(problem, params, rng)


def ensure_writable(directory: Path) -> None:
    try:
        directory.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(dir=directory, prefix=".probe-"):
            pass
    except OSError as exc:
        raise OSError(f"output directory {directory} is not writable: {exc}") from exc


def run_experiment(cfg: ExperimentConfig) -> tuple[StatsSummary, list[RunRecord]]:
    """Run every trial of ``cfg``, then write its reports if an output directory is set."""
    problem, params, opts = prepare(cfg)
    if cfg.output_directory is not None:
        ensure_writable(cfg.output_directory)

    records = []
    for trial in range(cfg.n_trials):
        records.append(run_trial(problem, cfg.algorithm, params, cfg.master_seed, trial))
        log.debug("%s trial %d: %.10g", cfg.tag, trial, records[-1].final_best_fitness)
    summary = summarize(records)
    log.info("%s: best %.7g mean %.7g std %.7g over %d trials",
             cfg.tag, summary.best, summary.mean, summary.std, summary.n_trials)

    if cfg.output_directory is not None:
        out = cfg.output_directory
        report.emit_convergence_csv(records, out / f"{cfg.tag}_convergence.csv")
        report.emit_stats_table({cfg.problem_id: {cfg.algorithm: summary}},
                                out / f"{cfg.tag}_stats.csv")
        report.emit_runs_csv(records, out / f"{cfg.tag}_runs.csv")
        if cfg.problem_id == "fishery":
            efforts = np.array([r.final_best_position for r in records])
            report.emit_fishery_report(efforts, fishery_model(opts), out)
        if cfg.svg:
            report.plot_convergence(records, out / f"{cfg.tag}_convergence.svg",
                                    title=f"{cfg.algorithm.upper()} on {cfg.problem_id}")
            if cfg.problem_id == "fishery":
                report.plot_fishery(out, fishery_model(opts))
    return summary, records

