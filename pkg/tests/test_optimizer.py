import math

import numpy as np
import pytest

from crsobolev.estimators.mc_config import Estimate
from crsobolev.functions.families import constant
from crsobolev.optimizer.nelder_mead import maximize
from crsobolev.optimizer.param_family import ParamFamily, singleton_family, span_family

def box(dimension: int = 2) -> ParamFamily:
    return ParamFamily([(-1.0, 1.0)] * dimension, lambda params: constant(1.0), label="box")

def concave(x: np.ndarray) -> float:
    return -((x[0] - 0.3) ** 2) - (x[1] + 0.2) ** 2

def test_maximize_finds_interior_optimum() -> None:
    result = maximize(concave, box(), budget=300, seed=1)
    assert result.best_params == pytest.approx([0.3, -0.2], abs=1e-3)
    assert result.best_value == pytest.approx(0.0, abs=1e-6)
    assert result.evaluations <= 300

def test_larger_budget_extends_the_trace() -> None:
    short = maximize(concave, box(), budget=50, seed=4)
    long = maximize(concave, box(), budget=100, seed=4)
    assert short.evaluations == 50
    assert long.trace[:50] == short.trace

def test_budget_below_simplex_size_raises() -> None:
    with pytest.raises(ValueError):
        maximize(concave, box(), budget=2, seed=0)

def test_singleton_family_evaluates_once() -> None:
    result = maximize(lambda x: Estimate(4.2, 0.1), singleton_family(constant(1.0)), budget=1, seed=0)
    assert result.best_value == 4.2
    assert result.evaluations == 1
    assert result.best_params.shape == (0,)

def test_non_finite_objective_is_minus_infinity() -> None:
    result = maximize(lambda x: math.nan, box(), budget=10, seed=0)
    assert result.best_value == -math.inf

def test_parameters_stay_in_the_box() -> None:
    seen: list[np.ndarray] = []

    def objective(x: np.ndarray) -> float:
        seen.append(x)
        return float(np.sum(x))

    result = maximize(objective, box(), budget=80, seed=2)
    assert all(np.all(np.abs(x) <= 1.0) for x in seen)
    assert result.best_value >= 1.9

def test_family_validation() -> None:
    with pytest.raises(ValueError):
        ParamFamily([(1.0, 1.0)], lambda params: constant(1.0))
    with pytest.raises(ValueError):
        box().build(np.zeros(3))

def test_span_family() -> None:
    family: ParamFamily = span_family(1, bumps=2)
    assert family.dimension == 7
    assert family.build(family.center).is_constant

    params: np.ndarray = np.zeros(7)
    params[1] = 0.5
    u = family.build(params)
    assert u(np.array([1.0, 0.0, 0.0, 0.0])) == pytest.approx(0.5)
