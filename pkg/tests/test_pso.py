import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taoopt.benchmarks import benchmark_problem
from taoopt.core import RandomSource
from taoopt.pso import PsoParams, inertia_weight, pso_run

from conftest import quadratic_problem


class TestInertia:
    def test_start(self):
        assert inertia_weight(0, 500) == 0.9

    def test_end(self):
        assert inertia_weight(500, 500) == pytest.approx(0.4, abs=1e-15)

    def test_midpoint(self):
        assert inertia_weight(250, 500) == pytest.approx(0.65, abs=1e-15)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            inertia_weight(501, 500)
        with pytest.raises(ValueError):
            inertia_weight(0, 0)


class TestParams:
    @pytest.mark.parametrize("change", [dict(population_size=1), dict(w_min=0.95),
                                        dict(max_iterations=-2)])
    def test_rejects(self, change):
        with pytest.raises(ValueError):
            PsoParams(**change)


class TestRun:
    def test_frozen_dynamics(self):
        problem = benchmark_problem("F5")
        params = PsoParams(c1=0.0, c2=0.0, w_max=1.0, w_min=1.0, population_size=10,
                           max_iterations=25)
        seen = []
        record = pso_run(problem, params, RandomSource(3),
                         observer=lambda t, swarm: seen.append(swarm.positions.copy()))
        assert all(np.array_equal(seen[0], p) for p in seen)
        assert np.all(record.best_fitness_trace == record.best_fitness_trace[0])

    def test_zero_iterations(self):
        record = pso_run(benchmark_problem("F1"), PsoParams(max_iterations=0), RandomSource(1))
        assert record.best_fitness_trace.size == 0
        assert np.isfinite(record.final_best_fitness)

    def test_deterministic(self):
        params = PsoParams(population_size=20, max_iterations=50)
        a = pso_run(benchmark_problem("F2"), params, RandomSource(9))
        b = pso_run(benchmark_problem("F2"), params, RandomSource(9))
        assert a.best_fitness_trace.tobytes() == b.best_fitness_trace.tobytes()
        assert np.array_equal(a.final_best_position, b.final_best_position)

    def test_eggcrate_protocol_mean(self):
        finals = [pso_run(benchmark_problem("F3"), PsoParams(), RandomSource(s)).final_best_fitness
                  for s in range(10)]
        assert np.mean(finals) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), dim=st.integers(1, 4), pop=st.integers(2, 12),
       center=st.floats(-4, 4))
def test_swarm_invariants(seed, dim, pop, center):
    problem = quadratic_problem(np.full(dim, center))
    history = []
    record = pso_run(problem, PsoParams(population_size=pop, max_iterations=20),
                     RandomSource(seed),
                     observer=lambda t, s: history.append(
                         (s.positions.copy(), s.best_fitness.copy())))
    assert np.all(np.diff(record.best_fitness_trace) <= 0)
    for (pos, pbest), (_, pbest_next) in zip(history, history[1:]):
        assert all(problem.bounds.contains(x) for x in pos)
        assert np.all(pbest_next <= pbest)
    assert record.final_best_fitness == history[-1][1].min()
