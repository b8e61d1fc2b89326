import numpy as np
import pytest

from taoopt.core import Bounds, BoundedProblem, RandomSource

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def quadratic_problem(center, lower=-5.0, upper=5.0, vectorized=True) -> BoundedProblem:
    center = np.asarray(center, dtype=float)

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.sum((x - center) ** 2, axis=-1)

    return BoundedProblem(
        name="quadratic",
        bounds=Bounds.uniform(lower, upper, center.size),
        objective=lambda x: float(f(x)),
        batch_objective=f if vectorized else None,
        known_optimum=0.0,
        known_optimizer=center,
    )


@pytest.fixture
def rng():
    return RandomSource(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
