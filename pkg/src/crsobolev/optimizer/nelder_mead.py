from collections.abc import Callable
import logging
import math
from typing import Any, NamedTuple

import numpy as np
from scipy import optimize

from ..estimators.chunks import STREAM_OPTIMIZER, chunk_rng

from .param_family import ParamFamily

logger: logging.Logger = logging.getLogger(__name__)

RESTARTS: int = 5
# Per-start cap, independent of the global budget.
EVALUATIONS_PER_DIMENSION: int = 200
SIMPLEX_FRACTION: float = 0.25

Objective = Callable[[np.ndarray], Any]

class OptResult(NamedTuple):
    best_value: float
    best_params: np.ndarray
    evaluations: int
    trace: list[tuple[int, float]]

class _BudgetExhausted(Exception):
    pass

class _Recorder:
    """Counts evaluations against the budget and keeps the running best."""
    def __init__(self, objective: Objective, family: ParamFamily, budget: int) -> None:
        self.objective = objective
        self.family = family
        self.budget = budget

        self.evaluations: int = 0
        self.best_value: float = -math.inf
        self.best_params: np.ndarray = family.center
        self.trace: list[tuple[int, float]] = []

    def __call__(self, params: np.ndarray) -> float:
        if self.evaluations >= self.budget:
            raise _BudgetExhausted

        params = self.family.clip(params)
        result: Any = self.objective(params)
        value: float = float(getattr(result, "value", result))
        self.evaluations += 1

        if not math.isfinite(value):
            logger.warning(f"[maximize] - Non-finite objective {value!r} at evaluation {self.evaluations}; treated as -inf.")
            value = -math.inf

        if value > self.best_value or self.evaluations == 1:
            self.best_value = value
            self.best_params = params.copy()

        self.trace.append((self.evaluations, self.best_value))
        return value

def _initial_simplex(start: np.ndarray, family: ParamFamily) -> np.ndarray:
    simplex: list[np.ndarray] = [start]
    span: np.ndarray = family.upper - family.lower
    for index in range(family.dimension):
        vertex: np.ndarray = start.copy()
        step: float = SIMPLEX_FRACTION * span[index]
        vertex[index] = start[index] + step if start[index] + step <= family.upper[index] else start[index] - step
        simplex.append(vertex)

    return np.array(simplex)

def maximize(objective: Objective, family: ParamFamily, budget: int, seed: int, restarts: int = RESTARTS) -> OptResult:
    """
    Bounded Nelder-Mead maximization with seeded restarts.

    The first start is the box center, the others are uniform draws from the
    box. Starts run one after another until the global budget is spent, so a
    larger budget extends the evaluation sequence of a smaller one.
    """
    if budget < family.dimension + 1:
        raise ValueError(f"Budget {budget} is below dimension + 1 = {family.dimension + 1}")

    recorder: _Recorder = _Recorder(objective, family, budget)
    if family.dimension == 0:
        recorder(np.empty(0))
        return OptResult(recorder.best_value, recorder.best_params, recorder.evaluations, recorder.trace)

    def negative(params: np.ndarray) -> float:
        value: float = recorder(params)
        return math.inf if value == -math.inf else -value

    per_start: int = EVALUATIONS_PER_DIMENSION * (family.dimension + 1)
    for index in range(restarts + 1):
        start: np.ndarray = family.center if index == 0 else family.sample(chunk_rng(seed, STREAM_OPTIMIZER, index))
        try:
            optimize.minimize(
                negative,
                start,
                method="Nelder-Mead",
                bounds=family.bounds,
                options={
                    "maxfev": per_start,
                    "xatol": 1e-9,
                    "fatol": 1e-12,
                    "initial_simplex": _initial_simplex(start, family)
                    }
                )
        except _BudgetExhausted:
            logger.debug(f"[maximize] - Budget of {budget} evaluations spent during start {index}.")
            break

        logger.debug(f"[maximize] - Start {index} done: best {recorder.best_value!r} after {recorder.evaluations} evaluations.")

    return OptResult(recorder.best_value, family.clip(recorder.best_params), recorder.evaluations, recorder.trace)
