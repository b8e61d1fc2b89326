"""Static-penalty constraint handling.

Two ways to fold ``g_i(x) <= 0`` and ``h_j(x) = 0`` into a box-bounded
objective:

* ``additive``: ``f + sum r_i max(g_i, 0) + sum c_j |h_j|``
* ``feasibility_count``: ``f`` when feasible, otherwise ``K - s K / m`` where
  ``s`` counts the satisfied constraints among ``m``.

A constraint map may return a scalar or a 1-D array; each component counts
as one constraint.  Maps written with numpy broadcasting over the last axis
also accept a batch of points ``(rows, n)``, which :func:`penalized_problem`
uses for fast population scoring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import Bounds, BoundedProblem

ADDITIVE = "additive"
FEASIBILITY_COUNT = "feasibility_count"


@dataclass(frozen=True)
class ConstraintSet:
    inequalities: Sequence[Callable] = ()
    equalities: Sequence[Callable] = ()
    equality_tolerance: float = 1e-6

    def __post_init__(self):
        if len(self.inequalities) + len(self.equalities) == 0:
            raise ValueError("a constraint set needs at least one constraint")
        if self.equality_tolerance < 0:
            raise ValueError("equality_tolerance must be >= 0")

    def inequality_values(self, x) -> np.ndarray:
        return _stack(self.inequalities, np.asarray(x, dtype=float))

    def equality_values(self, x) -> np.ndarray:
        return _stack(self.equalities, np.asarray(x, dtype=float))

    def satisfied(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Per-constraint feasibility flags (inequalities, equalities)."""
        return (self.inequality_values(x) <= 0.0,
                np.abs(self.equality_values(x)) <= self.equality_tolerance)

    def is_feasible(self, x) -> bool:
        ok_g, ok_h = self.satisfied(x)
        return bool(ok_g.all() and ok_h.all())


def _stack(maps, x: np.ndarray) -> np.ndarray:
    """Constraint values, shape ``(k,)`` for a point or ``(rows, k)`` for a batch."""
    lead = x.shape[:-1]
    if not maps:
        return np.empty(lead + (0,))
    parts = [np.asarray(g(x), dtype=float).reshape(lead + (-1,)) for g in maps]
    return np.concatenate(parts, axis=-1)


@dataclass(frozen=True)
class PenaltySpec:
    strategy: str = ADDITIVE
    r_weights: Optional[Sequence[float]] = None
    c_weights: Optional[Sequence[float]] = None
    K: float = 1e9
    m: Optional[int] = None  # total constraint count; counted at evaluation when None

    def __post_init__(self):
        if self.strategy not in (ADDITIVE, FEASIBILITY_COUNT):
            raise ValueError(f"unknown penalty strategy {self.strategy!r}")
        if not self.K > 0:
            raise ValueError(f"K must be positive, got {self.K}")
        if self.m is not None and self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")


def _weights(weights, count: int, label: str) -> np.ndarray:
    if weights is None:
        return np.ones(count)
    w = np.atleast_1d(np.asarray(weights, dtype=float))
    if w.size == 1:
        return np.full(count, w[0])
    if w.size != count:
        raise ValueError(f"{label} has {w.size} entries for {count} constraints")
    return w


def penalize_values(f, g, h, spec: PenaltySpec, equality_tolerance: float = 1e-6):
    """Penalized scores from objective and constraint values.

    ``f`` is a scalar or ``(rows,)``; ``g`` and ``h`` carry the constraints on
    their last axis.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    if spec.strategy == ADDITIVE:
        r = _weights(spec.r_weights, g.shape[-1], "r_weights")
        c = _weights(spec.c_weights, h.shape[-1], "c_weights")
        return f + np.sum(r * np.maximum(g, 0.0), axis=-1) + np.sum(c * np.abs(h), axis=-1)
    total = g.shape[-1] + h.shape[-1]
    m = total if spec.m is None else spec.m
    if m == 0:
        raise ValueError("feasibility-count penalty needs m >= 1")
    s = (np.sum(g <= 0.0, axis=-1) + np.sum(np.abs(h) <= equality_tolerance, axis=-1))
    return np.where(s == total, f, spec.K - s * (spec.K / m))


def additive_penalized(f_value: float, x, cs: ConstraintSet, spec: PenaltySpec) -> float:
    if spec.strategy != ADDITIVE:
        raise ValueError(f"spec strategy is {spec.strategy!r}, expected {ADDITIVE!r}")
    return float(penalize_values(f_value, cs.inequality_values(x), cs.equality_values(x),
                                 spec, cs.equality_tolerance))


def feasibility_count_penalized(f_value: float, x, cs: ConstraintSet, spec: PenaltySpec) -> float:
    if spec.strategy != FEASIBILITY_COUNT:
        raise ValueError(f"spec strategy is {spec.strategy!r}, expected {FEASIBILITY_COUNT!r}")
    return float(penalize_values(f_value, cs.inequality_values(x), cs.equality_values(x),
                                 spec, cs.equality_tolerance))


def penalized(f_value: float, x, cs: ConstraintSet, spec: PenaltySpec) -> float:
    if spec.strategy == ADDITIVE:
        return additive_penalized(f_value, x, cs, spec)
    return feasibility_count_penalized(f_value, x, cs, spec)


def penalized_problem(name: str, bounds: Bounds, objective: Callable, cs: ConstraintSet,
                      spec: PenaltySpec, vectorized: bool = False,
                      **kwargs) -> BoundedProblem:
    """Wrap a constrained problem as a box-bounded one under ``spec``.

    With ``vectorized=True`` the objective and every constraint map must
    broadcast over a leading batch axis.
    """
    def score(x):
        x = np.asarray(x, dtype=float)
        return penalized(float(objective(x)), x, cs, spec)

    def score_many(xs):
        xs = np.asarray(xs, dtype=float)
        return penalize_values(objective(xs), cs.inequality_values(xs),
                               cs.equality_values(xs), spec, cs.equality_tolerance)

    return BoundedProblem(
        name=name, bounds=bounds, objective=score,
        batch_objective=score_many if vectorized else None,
        constraints=cs, raw_objective=objective, **kwargs,
    )
