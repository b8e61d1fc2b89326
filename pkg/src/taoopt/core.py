"""Problem abstraction, random streams and run records shared by every optimizer."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class ConfigurationError(ValueError):
    """Unknown identifier or inconsistent experiment setting."""


class InvalidStateError(ValueError):
    """An optimizer state variable left its allowed domain."""


class NonFiniteObjectiveError(ArithmeticError):
    """The objective returned NaN or an infinity for some candidate."""

    def __init__(self, index: int, position: np.ndarray, value: float):
        self.index = index
        self.position = np.array(position, dtype=float)
        self.value = value
        super().__init__(
            f"objective returned {value!r} for agent {index} at position "
            f"{np.array2string(self.position, precision=10)}"
        )


def splitmix64(value: int) -> int:
    """One round of the SplitMix64 finalizer (Steele, Lea & Flood 2014)."""
    z = (value + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed: int, index: int) -> int:
    """Seed of stream ``index`` derived from ``master_seed``.

    ``splitmix64(splitmix64(master) ^ index)``, all arithmetic modulo 2**64.
    Part of the reproducibility interface: changing it changes every result.
    """
    return splitmix64(splitmix64(master_seed & MASK64) ^ (index & MASK64))


class RandomSource:
    """Seeded uniform generator backed by numpy's PCG64.

    A source is single-owner: never share one between concurrent runs, derive
    independent streams with :meth:`spawn` instead.
    """

    def __init__(self, seed: int):
        if seed < 0 or seed > MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def random(self, size=None):
        """Uniform draws in [0, 1)."""
        return self._gen.random(size)

    def uniform(self, low, high, size=None):
        return low + (np.asarray(high) - low) * self._gen.random(size)

    def spawn(self, index: int) -> "RandomSource":
        return RandomSource(mix_seed(self.seed, index))


@dataclass(frozen=True)
class Bounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lower, dtype=float).ravel()
        hi = np.array(self.upper, dtype=float).ravel()
        if lo.size == 0 or lo.shape != hi.shape:
            raise ValueError(
                f"bounds need equal non-empty lengths, got {lo.size} and {hi.size}"
            )
        if not np.all(lo < hi):
            bad = int(np.flatnonzero(~(lo < hi))[0])
            raise ValueError(
                f"lower bound must be below upper bound in every dimension "
                f"(dimension {bad}: {lo[bad]} >= {hi[bad]})"
            )
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def uniform(cls, low: float, high: float, dimension: int) -> "Bounds":
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass(frozen=True)
class BoundedProblem:
    """A box-bounded minimization problem.

    ``batch_objective``, when given, must agree with ``objective`` row by row;
    optimizers use it to score many candidates in one call.
    """

    name: str
    bounds: Bounds
    objective: Callable[[np.ndarray], float]
    known_optimum: Optional[float] = None
    known_optimizer: Optional[np.ndarray] = None
    batch_objective: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, repr=False, compare=False
    )
    # set for penalized problems: the constraint set and the unpenalized objective
    constraints: Optional[Any] = field(default=None, repr=False, compare=False)
    raw_objective: Optional[Callable[[np.ndarray], float]] = field(
        default=None, repr=False, compare=False
    )

    @property
    def dimension(self) -> int:
        return self.bounds.dimension

    def __call__(self, x) -> float:
        return float(self.objective(np.asarray(x, dtype=float)))

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if xs.shape[0] == 0:
            return np.empty(0)
        if self.batch_objective is not None:
            return np.asarray(self.batch_objective(xs), dtype=float)
        return np.array([float(self.objective(row)) for row in xs])


@dataclass
class RunRecord:
    trial_seed: int
    best_fitness_trace: np.ndarray
    final_best_position: np.ndarray
    final_best_fitness: float
    iterations_used: int


@dataclass(frozen=True)
class StatsSummary:
    best: float
    mean: float
    std: float
    n_trials: int


def clamp_to_bounds(x, b: Bounds) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != b.dimension:
        raise ValueError(f"vector has length {x.shape[-1]}, bounds have {b.dimension}")
    return np.minimum(np.maximum(x, b.lower), b.upper)


def reflect_into_bounds(x, b: Bounds) -> np.ndarray:
    """Fold coordinates back into the box as if the walls were mirrors."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != b.dimension:
        raise ValueError(f"vector has length {x.shape[-1]}, bounds have {b.dimension}")
    w = b.width
    y = np.mod(x - b.lower, 2.0 * w)
    out = b.lower + np.where(y > w, 2.0 * w - y, y)
    # mod rounding can land one ulp outside; in-box coordinates pass through untouched
    out = np.minimum(np.maximum(out, b.lower), b.upper)
    return np.where((x >= b.lower) & (x <= b.upper), x, out)


def uniform_in_box(rng: RandomSource, b: Bounds, count: Optional[int] = None) -> np.ndarray:
    """One point (or ``count`` rows of points) uniform in the box."""
    size = b.dimension if count is None else (count, b.dimension)
    return clamp_to_bounds(rng.uniform(b.lower, b.upper, size), b)


def summarize(records: Sequence[RunRecord]) -> StatsSummary:
    if len(records) == 0:
        raise ValueError("cannot summarize an empty list of runs")
    finals = np.sort([float(r.final_best_fitness) for r in records])
    # population std (ddof=0); sorting makes the result order-independent
    return StatsSummary(
        best=float(finals[0]),
        mean=float(np.mean(finals)),
        std=float(np.std(finals)),
        n_trials=len(finals),
    )


def check_finite(values: np.ndarray, positions: np.ndarray, indices: Sequence[int]) -> None:
    """Raise on the first non-finite value, naming the agent that produced it."""
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        k = int(bad[0])
        raise NonFiniteObjectiveError(int(indices[k]), positions[k], float(values[k]))
