"""Tumoral Angiogenesis Optimizer.

Cells migrate toward the incumbent best solution (the tumor) with a two-state
speed (fast ``v1`` / slow ``v2``) and a two-state direction (+1 toward the
tumor, -1 away from it), both switching as Markov chains.  Each move is

    x_i <- x_i + v_i * D_i * (tumor - x_i) + gamma**t * branch_i

followed by a boundary repair.  The default repair ("bounce") redraws an
overshooting coordinate uniformly between the cell's previous coordinate and
the violated bound; plain clamping piles overshooting cells onto the box
corners.  Every cell accumulates the length of the path it travels; when the
leading cell is more than ``d`` ahead of the runner-up it is held at the slow
speed, and every tumor renewal prunes all lengths back to zero.

Random draws are taken per iteration in a fixed order (speed uniforms,
direction uniforms, branch vectors, bounce uniforms), one slot per cell,
whether or not the cell ends up moving.  This fixes the stream layout and lets the iteration be
evaluated speculatively in vectorized blocks while matching cell-by-cell
processing exactly.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (
    Bounds,
    BoundedProblem,
    InvalidStateError,
    RandomSource,
    RunRecord,
    check_finite,
    clamp_to_bounds,
    reflect_into_bounds,
    uniform_in_box,
)

BOUNDARY_POLICIES = ("bounce", "clamp", "reflect")


@dataclass(frozen=True)
class TaoParams:
    v1: float = 5.332
    v2: float = 0.938
    p: float = 0.0416891  # fast -> slow
    q: float = 0.234  # slow -> fast
    r_dir: float = 0.194  # -1 -> +1
    s: float = 0.240  # +1 -> -1
    d: float = 55.0
    gamma: float = 0.7
    branch_scale: float = 0.1
    population_size: int = 100
    max_iterations: int = 500
    boundary: str = "bounce"

    def __post_init__(self):
        if not 0 < self.v2 < self.v1:
            raise ValueError(f"need 0 < v2 < v1, got v1={self.v1}, v2={self.v2}")
        for name in ("p", "q", "r_dir", "s"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"probability {name} must lie in [0, 1], got {value}")
        if not 0.5 <= self.gamma < 1.0:
            raise ValueError(f"gamma must lie in [0.5, 1), got {self.gamma}")
        if not self.d > 0:
            raise ValueError(f"tip-follower threshold d must be positive, got {self.d}")
        if self.branch_scale < 0:
            raise ValueError(f"branch_scale must be >= 0, got {self.branch_scale}")
        if self.population_size < 2:
            raise ValueError(f"population_size must be >= 2, got {self.population_size}")
        if self.max_iterations < 0:
            raise ValueError(f"max_iterations must be >= 0, got {self.max_iterations}")
        if self.boundary not in BOUNDARY_POLICIES:
            raise ValueError(
                f"boundary must be one of {BOUNDARY_POLICIES}, got {self.boundary!r}"
            )

    def replace(self, **changes) -> "TaoParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class CellState:
    position: np.ndarray
    speed: float
    direction: int
    traveled: float


@dataclass
class TaoState:
    """Population arrays, one row or entry per cell."""

    positions: np.ndarray
    speeds: np.ndarray
    directions: np.ndarray
    traveled: np.ndarray
    tumor_position: np.ndarray
    tumor_fitness: float
    iteration: int = 0
    # index of the last cell that renewed the tumor in the latest iteration
    last_renewal: Optional[int] = None

    @property
    def cells(self) -> list[CellState]:
        return [
            CellState(self.positions[i].copy(), float(self.speeds[i]),
                      int(self.directions[i]), float(self.traveled[i]))
            for i in range(len(self.speeds))
        ]

    def copy(self) -> "TaoState":
        return TaoState(
            self.positions.copy(), self.speeds.copy(), self.directions.copy(),
            self.traveled.copy(), self.tumor_position.copy(), self.tumor_fitness,
            self.iteration, self.last_renewal,
        )


def tao_init(problem: BoundedProblem, params: TaoParams, rng: RandomSource) -> TaoState:
    n = params.population_size
    positions = uniform_in_box(rng, problem.bounds, n)
    fitness = problem.evaluate_many(positions)
    check_finite(fitness, positions, range(n))
    best = int(np.argmin(fitness))
    return TaoState(
        positions=positions,
        speeds=np.full(n, params.v1),
        directions=np.ones(n, dtype=np.int8),
        traveled=np.zeros(n),
        tumor_position=positions[best].copy(),
        tumor_fitness=float(fitness[best]),
    )


def _next_speeds(speeds: np.ndarray, u: np.ndarray, params: TaoParams) -> np.ndarray:
    fast = speeds == params.v1
    if not np.all(fast | (speeds == params.v2)):
        bad = speeds[~(fast | (speeds == params.v2))][0]
        raise InvalidStateError(f"speed {bad} is neither v1={params.v1} nor v2={params.v2}")
    return np.where(
        fast,
        np.where(u < params.p, params.v2, params.v1),
        np.where(u < params.q, params.v1, params.v2),
    )


def _next_directions(directions: np.ndarray, u: np.ndarray, params: TaoParams) -> np.ndarray:
    forward = directions == 1
    if not np.all(forward | (directions == -1)):
        bad = directions[~(forward | (directions == -1))][0]
        raise InvalidStateError(f"direction {bad} is neither +1 nor -1")
    return np.where(
        forward,
        np.where(u < params.s, -1, 1),
        np.where(u < params.r_dir, 1, -1),
    ).astype(np.int8)


def apply_speed_rule(current_speed: float, params: TaoParams, rng: RandomSource) -> float:
    """Fast cells slow down with probability ``p``; slow cells speed up with ``q``."""
    u = rng.random()
    return float(_next_speeds(np.array([current_speed]), np.array([u]), params)[0])


def apply_direction_rule(current_direction: int, params: TaoParams, rng: RandomSource) -> int:
    """Retrograde cells turn forward with probability ``r_dir``; forward ones reverse with ``s``."""
    u = rng.random()
    return int(_next_directions(np.array([current_direction]), np.array([u]), params)[0])


def tip_restriction_active(traveled_lengths: Sequence[float], d: float) -> tuple[bool, int]:
    """Whether the longest path leads the runner-up by more than ``d``, and its index.

    A tie for the lead never activates the restriction.
    """
    lengths = np.asarray(traveled_lengths, dtype=float)
    if lengths.size < 2:
        raise ValueError("tip restriction needs at least two traveled lengths")
    tip = int(np.argmax(lengths))
    runner_up = np.partition(lengths, -2)[-2]
    return bool(lengths[tip] - runner_up > d), tip


def branch_vector(rng: RandomSource, bounds: Bounds, branch_scale: float,
                  count: Optional[int] = None) -> np.ndarray:
    """Zero-mean uniform perturbation spanning ``branch_scale`` of the box half-width."""
    if branch_scale < 0:
        raise ValueError(f"branch_scale must be >= 0, got {branch_scale}")
    half = branch_scale * bounds.width / 2.0
    size = bounds.dimension if count is None else (count, bounds.dimension)
    return half * (2.0 * rng.random(size) - 1.0)


def into_box(x: np.ndarray, bounds: Bounds, policy: str, previous: Optional[np.ndarray] = None,
             u: Optional[np.ndarray] = None) -> np.ndarray:
    """Repair out-of-box coordinates; ``bounce`` needs the previous in-box points and uniforms."""
    if policy == "bounce":
        return np.where(x > bounds.upper, previous + u * (bounds.upper - previous),
                        np.where(x < bounds.lower, previous + u * (bounds.lower - previous), x))
    if policy == "clamp":
        return clamp_to_bounds(x, bounds)
    if policy == "reflect":
        return reflect_into_bounds(x, bounds)
    raise ValueError(f"unknown boundary policy {policy!r}")


def step_lengths(displacements: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(displacements * displacements, axis=-1))


def tao_iterate(state: TaoState, problem: BoundedProblem, params: TaoParams,
                rng: RandomSource) -> TaoState:
    """One sweep over the cells in index order; returns the new state.

    The tumor is replaced as soon as a cell strictly beats it, and later
    cells in the same sweep already migrate toward the new tumor.
    """
    bounds = problem.bounds
    X = state.positions.copy()
    speeds = state.speeds.copy()
    directions = state.directions.copy()
    traveled = state.traveled.copy()
    tumor = state.tumor_position.copy()
    tumor_fitness = state.tumor_fitness
    pop = X.shape[0]

    u_speed = rng.random(pop)
    u_dir = rng.random(pop)
    branch = branch_vector(rng, bounds, params.branch_scale, pop)
    u_bounce = rng.random((pop, bounds.dimension))
    decay = params.gamma ** state.iteration

    restricted, tip = tip_restriction_active(traveled, params.d)
    if not restricted:
        tip = -1
    last_renewal = None

    start = 0
    while start < pop:
        idx = np.arange(start, pop)
        idx = idx[np.any(X[idx] != tumor, axis=1)]
        if idx.size == 0:
            break
        new_speeds = _next_speeds(speeds[idx], u_speed[idx], params)
        new_speeds[idx == tip] = params.v2
        new_dirs = _next_directions(directions[idx], u_dir[idx], params)
        old = X[idx]
        raw = old + (new_speeds * new_dirs)[:, None] * (tumor - old) + decay * branch[idx]
        cand = into_box(raw, bounds, params.boundary, old, u_bounce[idx])
        fitness = problem.evaluate_many(cand)

        better = np.flatnonzero(fitness < tumor_fitness)
        stop = int(better[0]) + 1 if better.size else idx.size
        check_finite(fitness[:stop], cand[:stop], idx[:stop])

        moved = idx[:stop]
        traveled[moved] += step_lengths(cand[:stop] - old[:stop])
        X[moved] = cand[:stop]
        speeds[moved] = new_speeds[:stop]
        directions[moved] = new_dirs[:stop]
        if not better.size:
            break
        tumor = cand[stop - 1].copy()
        tumor_fitness = float(fitness[stop - 1])
        traveled[:] = 0.0
        tip = -1
        last_renewal = int(moved[-1])
        start = last_renewal + 1

    return TaoState(X, speeds, directions, traveled, tumor, tumor_fitness,
                    state.iteration + 1, last_renewal)


def tao_run(problem: BoundedProblem, params: TaoParams, rng: RandomSource) -> RunRecord:
    state = tao_init(problem, params, rng)
    trace = np.empty(params.max_iterations)
    for t in range(params.max_iterations):
        state = tao_iterate(state, problem, params, rng)
        trace[t] = state.tumor_fitness
    return RunRecord(
        trial_seed=rng.seed,
        best_fitness_trace=trace,
        final_best_position=state.tumor_position.copy(),
        final_best_fitness=state.tumor_fitness,
        iterations_used=params.max_iterations,
    )
