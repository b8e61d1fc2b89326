"""Classical unconstrained test functions F1-F7.

Each function accepts a single point ``(n,)`` or a batch ``(m, n)`` and
reduces over the last axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import Bounds, BoundedProblem, ConfigurationError


def sphere(x):
    x = np.asarray(x, dtype=float)
    return np.sum(x * x, axis=-1)


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    head, tail = x[..., :-1], x[..., 1:]
    return np.sum(100.0 * (tail - head**2) ** 2 + (head - 1.0) ** 2, axis=-1)


def eggcrate(x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2:
        raise ValueError(f"eggcrate is two-dimensional, got length {x.shape[-1]}")
    a, b = x[..., 0], x[..., 1]
    return a * a + b * b + 25.0 * (np.sin(a) ** 2 + np.sin(b) ** 2)


def step(x, floor: bool = False):
    """Shifted sphere sum((x+0.5)^2); ``floor=True`` gives the classical sum(floor(x+0.5)^2)."""
    x = np.asarray(x, dtype=float)
    y = np.floor(x + 0.5) if floor else x + 0.5
    return np.sum(y * y, axis=-1)


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    return 10.0 * n + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x), axis=-1)


def michalewicz(x, m: int = 10):
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.shape[-1] + 1)
    return -np.sum(np.sin(x) * np.sin(i * x * x / np.pi) ** (2 * m), axis=-1)


def sum_squares(x):
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.shape[-1] + 1)
    return np.sum(i * x * x, axis=-1)


MICHALEWICZ_5D_OPTIMIZER = np.array(
    [2.20290552, 1.57079633, 1.28499157, 1.92305847, 1.72046977]
)
MICHALEWICZ_5D_MINIMUM = -4.687658179


@dataclass(frozen=True)
class BenchmarkDef:
    id: str
    name: str
    dimension: int
    bounds: Bounds
    known_minimum: float
    function: Callable
    known_optimizer: Optional[np.ndarray] = None
    dimension_generic: bool = True


def _def(id, name, fn, n, lo, hi, fmin, xopt, generic=True):
    return BenchmarkDef(id, name, n, Bounds.uniform(lo, hi, n), fmin, fn,
                        None if xopt is None else np.asarray(xopt, dtype=float), generic)


BENCHMARKS: dict[str, BenchmarkDef] = {
    b.id: b
    for b in (
        _def("F1", "Sphere", sphere, 20, -100, 100, 0.0, np.zeros(20)),
        _def("F2", "Rosenbrock", rosenbrock, 10, -30, 30, 0.0, np.ones(10)),
        _def("F3", "Eggcrate", eggcrate, 2, -2 * math.pi, 2 * math.pi, 0.0, np.zeros(2),
             generic=False),
        _def("F4", "Step", step, 30, -5.12, 5.12, 0.0, np.full(30, -0.5)),
        _def("F5", "Rastrigin", rastrigin, 10, -5.12, 5.12, 0.0, np.zeros(10)),
        _def("F6", "Michalewicz", michalewicz, 5, 0, math.pi, MICHALEWICZ_5D_MINIMUM,
             MICHALEWICZ_5D_OPTIMIZER),
        _def("F7", "Sum Squares", sum_squares, 30, -10, 10, 0.0, np.zeros(30)),
    )
}


def get_benchmark(id: str) -> BenchmarkDef:
    try:
        return BENCHMARKS[id]
    except KeyError:
        raise ConfigurationError(
            f"unknown benchmark {id!r}; valid ids: {', '.join(BENCHMARKS)}"
        ) from None


def evaluate(id: str, x, *, step_floor: bool = False) -> float:
    bench = get_benchmark(id)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("evaluate expects a single point")
    if not bench.dimension_generic and x.size != bench.dimension:
        raise ValueError(f"{id} requires dimension {bench.dimension}, got {x.size}")
    if id == "F4":
        return float(step(x, floor=step_floor))
    return float(bench.function(x))


def benchmark_problem(id: str, *, step_floor: bool = False) -> BoundedProblem:
    bench = get_benchmark(id)
    fn = bench.function
    if id == "F4" and step_floor:
        def fn(x):
            return step(x, floor=True)
    return BoundedProblem(
        name=id,
        bounds=bench.bounds,
        objective=lambda x: float(fn(x)),
        known_optimum=bench.known_minimum,
        known_optimizer=bench.known_optimizer,
        batch_objective=fn,
    )
