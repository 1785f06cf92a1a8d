from collections.abc import Callable, Sequence
from typing import Self

import numpy as np

from ..functions.families import cap_bump, constant, coordinate, linear_combination, random_center
from ..functions.test_function import TestFunction

Builder = Callable[[np.ndarray], TestFunction]

class ParamFamily:
    """Box-constrained parametric family of test functions."""
    def __init__(self: Self, bounds: Sequence[tuple[float, float]], builder: Builder, label: str = "family") -> None:
        for index, (low, high) in enumerate(bounds):
            if not low < high:
                raise ValueError(f"Degenerate bound for parameter {index}: [{low}, {high}]")

        self.bounds: list[tuple[float, float]] = [(float(low), float(high)) for low, high in bounds]
        self.builder = builder
        self.label = label

    @property
    def dimension(self: Self) -> int:
        return len(self.bounds)

    @property
    def lower(self: Self) -> np.ndarray:
        return np.array([low for low, _ in self.bounds], dtype=float)

    @property
    def upper(self: Self) -> np.ndarray:
        return np.array([high for _, high in self.bounds], dtype=float)

    @property
    def center(self: Self) -> np.ndarray:
        return (self.lower + self.upper) / 2.0

    def clip(self: Self, params: np.ndarray) -> np.ndarray:
        return np.clip(np.asarray(params, dtype=float), self.lower, self.upper)

    def sample(self: Self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper)

    def build(self: Self, params: np.ndarray) -> TestFunction:
        params = np.asarray(params, dtype=float)
        if params.shape != (self.dimension,):
            raise ValueError(f"Family {self.label} expects {self.dimension} parameters, got shape {params.shape}")

        return self.builder(self.clip(params))

    def __repr__(self: Self) -> str:
        return f"ParamFamily({self.label}, dimension={self.dimension})"

def span_family(n: int = 1, bumps: int = 3, coefficient_bound: float = 1.0, seed: int = 0, radius: float = 1.2, sharpness: float = 1.0) -> ParamFamily:
    """
    Span of the constant 1, the 2n+2 coordinates and ``bumps`` cap bumps at
    fixed seeded centers, with every coefficient in [-bound, bound].
    """
    if not coefficient_bound > 0:
        raise ValueError(f"Coefficient bound must be positive: {coefficient_bound}")

    basis: list[TestFunction] = [constant(1.0, n)]
    basis.extend(coordinate(i, n) for i in range(1, 2 * n + 3))
    basis.extend(cap_bump(random_center(n, seed, 1000 + index), radius, sharpness) for index in range(bumps))

    def builder(params: np.ndarray) -> TestFunction:
        label: str = "span[" + ",".join(f"{value:.4g}" for value in params) + "]"
        return linear_combination(list(zip(map(float, params), basis)), label=label)

    return ParamFamily([(-coefficient_bound, coefficient_bound)] * len(basis), builder, label=f"span(n={n}, bumps={bumps})")

def singleton_family(u: TestFunction) -> ParamFamily:
    return ParamFamily([], lambda params: u, label=f"singleton({u.label})")
