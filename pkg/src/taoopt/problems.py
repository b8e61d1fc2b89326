"""Constrained application problems wired to their penalty strategies.

Every objective and constraint here broadcasts over a leading batch axis, so
the same code scores one design ``(n,)`` or a population ``(rows, n)``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Any, Mapping, Optional

import numpy as np

from .benchmarks import BENCHMARKS, benchmark_problem
from .constraints import (
    ADDITIVE,
    FEASIBILITY_COUNT,
    ConstraintSet,
    PenaltySpec,
    penalize_values,
    penalized,
    penalized_problem,
)
from .core import Bounds, BoundedProblem, ConfigurationError


def _cols(x):
    x = np.asarray(x, dtype=float)
    return [x[..., k] for k in range(x.shape[-1])]


# -- Rosenbrock with a cubic and a line ------------------------------------

def rosenbrock_2d(x):
    a, b = _cols(x)
    return (1.0 - a) ** 2 + 100.0 * (b - a * a) ** 2


ROSENBROCK_CONSTRAINTS = ConstraintSet(inequalities=(
    lambda x: (x[..., 0] - 1.0) ** 3 - x[..., 1] + 1.0,
    lambda x: x[..., 0] + x[..., 1] - 2.0,
))
ROSENBROCK_BOUNDS = Bounds.uniform(-100, 100, 2)


def rosenbrock_constrained(x) -> float:
    return penalized(float(rosenbrock_2d(x)), x, ROSENBROCK_CONSTRAINTS, PenaltySpec(ADDITIVE))


# -- cantilever beam -------------------------------------------------------

CANTILEVER_LOADS = np.array([61.0, 37.0, 19.0, 7.0, 1.0])
CANTILEVER_BOUNDS = Bounds.uniform(0.01, 100, 5)


def cantilever_weight(x):
    return 0.06224 * np.sum(np.asarray(x, dtype=float), axis=-1)


def cantilever_stiffness(x):
    """Left-hand side of the deflection constraint, feasible when <= 1."""
    x = np.asarray(x, dtype=float)
    return np.sum(CANTILEVER_LOADS / x**3, axis=-1)


CANTILEVER_CONSTRAINTS = ConstraintSet(inequalities=(lambda x: cantilever_stiffness(x) - 1.0,))


def cantilever(x) -> float:
    return penalized(float(cantilever_weight(x)), x, CANTILEVER_CONSTRAINTS, PenaltySpec(ADDITIVE))


# -- pressure vessel -------------------------------------------------------

PRESSURE_VESSEL_BOUNDS = Bounds([0.0, 0.0, 10.0, 10.0], [99.0, 99.0, 200.0, 200.0])


def pressure_vessel_cost(x, coefficient: float = 0.6224):
    ts, th, r, length = _cols(x)
    return (coefficient * ts * r * length + 1.7781 * th * r**2
            + 3.1661 * ts**2 * length + 19.84 * ts**2 * r)


PRESSURE_VESSEL_CONSTRAINTS = ConstraintSet(inequalities=(
    lambda x: -x[..., 0] + 0.0193 * x[..., 2],
    lambda x: -x[..., 1] + 0.00954 * x[..., 2],
    lambda x: -math.pi * x[..., 2] ** 2 * x[..., 3] - 4.0 / 3.0 * math.pi * x[..., 2] ** 3 + 1296000.0,
    lambda x: x[..., 3] - 240.0,
))


def pressure_vessel(x, coefficient: float = 0.6224, K: float = 1e9) -> float:
    return penalized(float(pressure_vessel_cost(x, coefficient)), x,
                     PRESSURE_VESSEL_CONSTRAINTS, PenaltySpec(FEASIBILITY_COUNT, K=K, m=4))


# -- tension/compression spring -------------------------------------------

SPRING_BOUNDS = Bounds([0.05, 0.25, 2.0], [2.0, 1.3, 15.0])


def spring_weight(x):
    wire, coil, loops = _cols(x)
    return (loops + 2.0) * coil * wire**2


SPRING_CONSTRAINTS = ConstraintSet(inequalities=(
    lambda x: 1.0 - x[..., 1] ** 3 * x[..., 2] / (71785.0 * x[..., 0] ** 4),
    lambda x: ((4.0 * x[..., 1] ** 2 - x[..., 0] * x[..., 1])
               / (12566.0 * (x[..., 1] * x[..., 0] ** 3 - x[..., 0] ** 4))
               + 1.0 / (5108.0 * x[..., 0] ** 2) - 1.0),
    lambda x: 1.0 - 140.45 * x[..., 0] / (x[..., 1] ** 2 * x[..., 2]),
    lambda x: (x[..., 1] + x[..., 0]) / 1.5 - 1.0,
))


def spring(x, K: float = 1e9) -> float:
    return penalized(float(spring_weight(x)), x, SPRING_CONSTRAINTS,
                     PenaltySpec(FEASIBILITY_COUNT, K=K, m=4))


# -- Gordon-Schaefer fishery ----------------------------------------------

@dataclass(frozen=True)
class FisheryModel:
    B0: float = 1.0836e4
    r_growth: float = 0.7534
    K_cap: float = 2.7399e4
    q_catch: float = 0.01081
    price: float = 6000.0
    cost: float = 3070.0
    rho: float = 0.9
    T: int = 30
    B_u: float = 1.0836e4
    B_s: float = 2.2e4
    E_min: float = 0.0
    E_max: float = 41.0
    penalty_weight: float = 1.0
    enforce_upper: bool = False

    def __post_init__(self):
        if not 0 < self.B0 <= self.K_cap:
            raise ValueError(f"need 0 < B0 <= K_cap, got B0={self.B0}, K_cap={self.K_cap}")
        if not 0 <= self.E_min < self.E_max:
            raise ValueError(f"need 0 <= E_min < E_max, got {self.E_min}, {self.E_max}")
        if not 0 <= self.rho <= 1:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if int(self.T) != self.T or self.T < 1:
            raise ValueError(f"time horizon T must be a positive integer, got {self.T}")
        object.__setattr__(self, "T", int(self.T))

    @property
    def bounds(self) -> Bounds:
        return Bounds.uniform(self.E_min, self.E_max, self.T)

    def replace(self, **changes) -> "FisheryModel":
        return dataclasses.replace(self, **changes)


def simulate_biomass(E, model: FisheryModel) -> np.ndarray:
    """Biomass trajectory B(0..T) under yearly effort E(0..T-1).

    Accepts a batch of effort plans ``(rows, T)`` and returns ``(rows, T+1)``.
    """
    E = np.asarray(E, dtype=float)
    if E.shape[-1] != model.T:
        raise ValueError(f"effort plan has {E.shape[-1]} years, model horizon is {model.T}")
    B = np.empty(E.shape[:-1] + (model.T + 1,))
    B[..., 0] = model.B0
    r, K, q = model.r_growth, model.K_cap, model.q_catch
    for t in range(model.T):
        b = B[..., t]
        B[..., t + 1] = b + r * b * (1.0 - b / K) - q * E[..., t] * b
    return B


def discounted_rent(E, B, model: FisheryModel):
    E = np.asarray(E, dtype=float)
    disc = model.rho ** np.arange(model.T)
    rent = model.price * model.q_catch * E * B[..., :-1] - model.cost * E
    return np.sum(disc * rent, axis=-1)


def fishery_value(E, model: FisheryModel):
    """The harvesting functional J(E): discounted rent plus terminal biomass."""
    B = simulate_biomass(E, model)
    return discounted_rent(E, B, model) + B[..., -1]


def _fishery_violations(B, model: FisheryModel):
    g = model.B_u - B[..., 1:]
    if model.enforce_upper:
        g = np.concatenate([g, B[..., 1:] - model.B_s], axis=-1)
    return g


def fishery_objective(E, model: FisheryModel):
    """Negated J plus the additive biomass-threshold penalty (minimization form)."""
    B = simulate_biomass(E, model)
    J = discounted_rent(E, B, model) + B[..., -1]
    g = _fishery_violations(B, model)
    return penalize_values(-J, g, np.empty(g.shape[:-1] + (0,)),
                           PenaltySpec(ADDITIVE, r_weights=[model.penalty_weight]))


def fishery_constraints(model: FisheryModel) -> ConstraintSet:
    return ConstraintSet(inequalities=(
        lambda E: _fishery_violations(simulate_biomass(E, model), model),
    ))


def fishery_problem(model: Optional[FisheryModel] = None) -> BoundedProblem:
    model = model or FisheryModel()
    return BoundedProblem(
        name="fishery",
        bounds=model.bounds,
        objective=lambda E: float(fishery_objective(E, model)),
        batch_objective=lambda E: fishery_objective(E, model),
        constraints=fishery_constraints(model),
        raw_objective=lambda E: -fishery_value(E, model),
    )


# -- registry --------------------------------------------------------------

CONSTRAINED_IDS = ("rosenbrock-constrained", "cantilever", "pressure-vessel", "spring", "fishery")
FISHERY_OPTIONS = tuple(f.name for f in dataclasses.fields(FisheryModel))
PROBLEM_OPTIONS: dict[str, tuple[str, ...]] = {
    "rosenbrock-constrained": (),
    "cantilever": (),
    "pressure-vessel": ("coefficient", "K"),
    "spring": ("K",),
    "fishery": FISHERY_OPTIONS,
    **{bid: (("step_floor",) if bid == "F4" else ()) for bid in BENCHMARKS},
}


def problem_ids() -> tuple[str, ...]:
    return tuple(BENCHMARKS) + CONSTRAINED_IDS


def _coerce(template: Any, value: Any):
    if isinstance(value, str):
        if isinstance(template, bool):
            lowered = value.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ConfigurationError(f"expected a boolean, got {value!r}")
        try:
            number = float(value)
        except ValueError:
            raise ConfigurationError(f"expected a number, got {value!r}") from None
        if isinstance(template, int):
            if not number.is_integer():
                raise ConfigurationError(f"expected an integer, got {value!r}")
            return int(number)
        return number
    return value


def fishery_model(options: Optional[Mapping[str, Any]] = None) -> FisheryModel:
    base = FisheryModel()
    options = dict(options or {})
    unknown = sorted(set(options) - set(FISHERY_OPTIONS))
    if unknown:
        raise ConfigurationError(
            f"unknown fishery option(s) {unknown}; valid: {', '.join(FISHERY_OPTIONS)}"
        )
    changes = {k: _coerce(getattr(base, k), v) for k, v in options.items()}
    try:
        return base.replace(**changes)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None


def build_problem(problem_id: str, options: Optional[Mapping[str, Any]] = None) -> BoundedProblem:
    """Problem instance by id; ``options`` are problem-specific overrides."""
    if problem_id not in PROBLEM_OPTIONS:
        raise ConfigurationError(
            f"unknown problem {problem_id!r}; valid ids: {', '.join(problem_ids())}"
        )
    options = dict(options or {})
    allowed = PROBLEM_OPTIONS[problem_id]
    unknown = sorted(set(options) - set(allowed))
    if unknown:
        raise ConfigurationError(
            f"option(s) {unknown} not understood by {problem_id!r}; "
            f"valid: {', '.join(allowed) if allowed else 'none'}"
        )

    if problem_id in BENCHMARKS:
        return benchmark_problem(problem_id,
                                 step_floor=_coerce(False, options.get("step_floor", False)))
    if problem_id == "rosenbrock-constrained":
        return penalized_problem(problem_id, ROSENBROCK_BOUNDS, rosenbrock_2d,
                                 ROSENBROCK_CONSTRAINTS, PenaltySpec(ADDITIVE), vectorized=True,
                                 known_optimum=0.0, known_optimizer=np.ones(2))
    if problem_id == "cantilever":
        return penalized_problem(problem_id, CANTILEVER_BOUNDS, cantilever_weight,
                                 CANTILEVER_CONSTRAINTS, PenaltySpec(ADDITIVE), vectorized=True)
    if problem_id == "pressure-vessel":
        coefficient = _coerce(0.0, options.get("coefficient", 0.6224))
        K = _coerce(0.0, options.get("K", 1e9))
        return penalized_problem(problem_id, PRESSURE_VESSEL_BOUNDS,
                                 lambda x: pressure_vessel_cost(x, coefficient),
                                 PRESSURE_VESSEL_CONSTRAINTS,
                                 PenaltySpec(FEASIBILITY_COUNT, K=K, m=4), vectorized=True)
    if problem_id == "spring":
        K = _coerce(0.0, options.get("K", 1e9))
        return penalized_problem(problem_id, SPRING_BOUNDS, spring_weight, SPRING_CONSTRAINTS,
                                 PenaltySpec(FEASIBILITY_COUNT, K=K, m=4), vectorized=True)
    return fishery_problem(fishery_model(options))
