"""Tumoral Angiogenesis Optimizer, a PSO baseline, test functions and constrained problems."""

from .core import (
    Bounds,
    BoundedProblem,
    ConfigurationError,
    InvalidStateError,
    NonFiniteObjectiveError,
    RandomSource,
    RunRecord,
    StatsSummary,
    clamp_to_bounds,
    mix_seed,
    summarize,
    uniform_in_box,
)
from .pso import PsoParams, pso_run
from .tao import TaoParams, tao_run

__all__ = [
    "Bounds",
    "BoundedProblem",
    "ConfigurationError",
    "InvalidStateError",
    "NonFiniteObjectiveError",
    "PsoParams",
    "RandomSource",
    "RunRecord",
    "StatsSummary",
    "TaoParams",
    "clamp_to_bounds",
    "mix_seed",
    "pso_run",
    "summarize",
    "tao_run",
    "uniform_in_box",
]
