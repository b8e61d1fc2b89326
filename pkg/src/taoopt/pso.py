"""Standard global-best PSO with linearly decreasing inertia weight."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .core import (
    BoundedProblem,
    RandomSource,
    RunRecord,
    check_finite,
    clamp_to_bounds,
    uniform_in_box,
)


@dataclass(frozen=True)
class PsoParams:
    c1: float = 2.0
    c2: float = 2.0
    w_max: float = 0.9
    w_min: float = 0.4
    population_size: int = 100
    max_iterations: int = 500

    def __post_init__(self):
        if not 0 <= self.w_min <= self.w_max:
            raise ValueError(f"need 0 <= w_min <= w_max, got {self.w_min}, {self.w_max}")
        if self.population_size < 2:
            raise ValueError(f"population_size must be >= 2, got {self.population_size}")
        if self.max_iterations < 0:
            raise ValueError(f"max_iterations must be >= 0, got {self.max_iterations}")

    def replace(self, **changes) -> "PsoParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ParticleState:
    position: np.ndarray
    velocity: np.ndarray
    personal_best_position: np.ndarray
    personal_best_fitness: float


def inertia_weight(t: int, t_max: int, w_max: float = 0.9, w_min: float = 0.4) -> float:
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    if not 0 <= t <= t_max:
        raise ValueError(f"iteration {t} outside [0, {t_max}]")
    return w_max - (w_max - w_min) / t_max * t


@dataclass
class Swarm:
    positions: np.ndarray
    velocities: np.ndarray
    best_positions: np.ndarray
    best_fitness: np.ndarray

    @property
    def particles(self) -> list[ParticleState]:
        return [
            ParticleState(self.positions[i].copy(), self.velocities[i].copy(),
                          self.best_positions[i].copy(), float(self.best_fitness[i]))
            for i in range(len(self.best_fitness))
        ]


def pso_run(problem: BoundedProblem, params: PsoParams, rng: RandomSource,
            observer=None) -> RunRecord:
    """Run the swarm; ``observer(t, swarm)`` is called after every iteration if given.

    The global best is refreshed once per iteration, after all particles moved.
    """
    n = params.population_size
    x = uniform_in_box(rng, problem.bounds, n)
    fitness = problem.evaluate_many(x)
    check_finite(fitness, x, range(n))
    swarm = Swarm(x, np.zeros_like(x), x.copy(), fitness.copy())
    g = int(np.argmin(swarm.best_fitness))
    gbest, gbest_f = swarm.best_positions[g].copy(), float(swarm.best_fitness[g])

    t_max = max(params.max_iterations, 1)
    trace = np.empty(params.max_iterations)
    for t in range(params.max_iterations):
        w = inertia_weight(t, t_max, params.w_max, params.w_min)
        r1 = rng.random(x.shape)
        r2 = rng.random(x.shape)
        swarm.velocities = (w * swarm.velocities
                            + params.c1 * r1 * (swarm.best_positions - swarm.positions)
                            + params.c2 * r2 * (gbest - swarm.positions))
        swarm.positions = clamp_to_bounds(swarm.positions + swarm.velocities, problem.bounds)
        fitness = problem.evaluate_many(swarm.positions)
        check_finite(fitness, swarm.positions, range(n))
        improved = fitness < swarm.best_fitness
        swarm.best_positions[improved] = swarm.positions[improved]
        swarm.best_fitness[improved] = fitness[improved]
        g = int(np.argmin(swarm.best_fitness))
        if swarm.best_fitness[g] < gbest_f:
            gbest, gbest_f = swarm.best_positions[g].copy(), float(swarm.best_fitness[g])
        trace[t] = gbest_f
        if observer is not None:
            observer(t, swarm)

    return RunRecord(
        trial_seed=rng.seed,
        best_fitness_trace=trace,
        final_best_position=gbest,
        final_best_fitness=gbest_f,
        iterations_used=params.max_iterations,
    )
