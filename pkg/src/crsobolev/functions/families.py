from collections.abc import Sequence
import logging
import math

import numpy as np

from ..enums import Domain
from ..exceptions import PositivityError
from ..estimators.chunks import STREAM_SUITE, chunk_rng
from ..geometry.sphere import distance_coords, uniform_coords
from ..geometry.sphere_point import SpherePoint

from .test_function import Evaluator, TestFunction, lipschitz_of_profile

logger: logging.Logger = logging.getLogger(__name__)

# Largest cr_distance between two sphere points (antipodes).
SPHERE_DIAMETER: float = 2.0

def constant(c: float, n: int = 1) -> TestFunction:
    return TestFunction(
        evaluator=lambda coords: np.full(coords.shape[:-1], float(c)),
        n=n,
        label=f"constant({c!r})",
        is_constant=True,
        is_mean_zero=(c == 0),
        lipschitz_bound=0.0,
        sup_bound=abs(float(c))
        )

def coordinate(i: int, n: int = 1) -> TestFunction:
    if not 1 <= i <= 2 * n + 2:
        raise ValueError(f"Coordinate index out of range 1..{2 * n + 2}: {i}")

    # |xi_i - eta_i| <= |xi - eta| <= d(xi, eta), so the bound is 1.
    return TestFunction(
        evaluator=lambda coords: coords[..., i - 1],
        n=n,
        label=f"coordinate({i})",
        is_mean_zero=True,
        lipschitz_bound=1.0,
        sup_bound=1.0
        )

def _bump_profile(x: np.ndarray, sharpness: float) -> np.ndarray:
    inside: np.ndarray = x < 1.0
    safe: np.ndarray = np.where(inside, x, 0.0)
    return np.where(inside, np.exp(-sharpness / (1.0 - safe * safe)), 0.0)

def cap_bump(center: SpherePoint, radius: float, sharpness: float) -> TestFunction:
    if not 0 < radius < SPHERE_DIAMETER:
        raise ValueError(f"Cap radius must lie in (0, {SPHERE_DIAMETER}): {radius}")
    if not sharpness > 0:
        raise ValueError(f"Sharpness must be positive: {sharpness}")

    center_coords: np.ndarray = center.coords.copy()

    def profile_derivative(d: np.ndarray) -> np.ndarray:
        x: np.ndarray = np.minimum(d / radius, 1.0 - 1e-12)
        return _bump_profile(x, sharpness) * sharpness * 2.0 * x / (1.0 - x * x) ** 2 / radius

    return TestFunction(
        evaluator=lambda coords: _bump_profile(distance_coords(coords, center_coords) / radius, sharpness),
        n=center.n,
        label=f"cap_bump(r={radius!r}, k={sharpness!r})",
        lipschitz_bound=lipschitz_of_profile(profile_derivative, radius),
        sup_bound=math.exp(-sharpness)
        )

def perturbed_constant(eps: float, phi: TestFunction) -> TestFunction:
    if not phi.is_mean_zero:
        raise ValueError(f"Perturbation must be mean-zero: {phi.label}")
    if eps == 0:
        return constant(1.0, phi.n)

    if abs(eps) * phi.sup_estimate() >= 1.0:
        raise PositivityError(f"1 + eps*phi is not positive for eps={eps!r} and {phi.label}")

    return TestFunction(
        evaluator=lambda coords: 1.0 + eps * phi.evaluator(coords),
        n=phi.n,
        label=f"1+{eps!r}*{phi.label}",
        domain=phi.domain,
        lipschitz_bound=None if phi.lipschitz_bound is None else abs(eps) * phi.lipschitz_bound,
        sup_bound=None if phi.sup_bound is None else 1.0 + abs(eps) * phi.sup_bound,
        smoothness=phi.smoothness
        )

def linear_combination(terms: Sequence[tuple[float, TestFunction]], offset: float = 0.0, label: str | None = None) -> TestFunction:
    if not terms:
        raise ValueError("A linear combination needs at least one term")

    n: int = terms[0][1].n
    domain: Domain = terms[0][1].domain
    coefficients: np.ndarray = np.array([coefficient for coefficient, _ in terms], dtype=float)
    functions: list[TestFunction] = [function for _, function in terms]

    def evaluator(coords: np.ndarray) -> np.ndarray:
        total: np.ndarray = np.full(coords.shape[:-1], float(offset))
        for coefficient, function in zip(coefficients, functions):
            if coefficient != 0:
                total = total + coefficient * function.evaluator(coords)
        return total

    active: list[tuple[float, TestFunction]] = [(c, f) for c, f in zip(coefficients, functions) if c != 0]
    lipschitz: list[float | None] = [f.lipschitz_bound for _, f in active if not f.is_constant]
    sups: list[float | None] = [f.sup_bound for _, f in active]
    non_constant: bool = any(not f.is_constant for _, f in active)

    return TestFunction(
        evaluator=evaluator,
        n=n,
        label=label or " + ".join(f"{c:.4g}*{f.label}" for c, f in active) or "0",
        domain=domain,
        is_constant=not non_constant,
        is_mean_zero=offset == 0 and all(f.is_mean_zero for _, f in active),
        lipschitz_bound=None if None in lipschitz else sum(abs(c) * (f.lipschitz_bound or 0.0) for c, f in active),
        sup_bound=None if None in sups else abs(offset) + sum(abs(c) * f.sup_bound for c, f in active)
        )

def product(first: TestFunction, second: TestFunction) -> TestFunction:
    lipschitz: float | None = None
    if None not in (first.lipschitz_bound, second.lipschitz_bound, first.sup_bound, second.sup_bound):
        lipschitz = first.sup_bound * second.lipschitz_bound + second.sup_bound * first.lipschitz_bound

    return TestFunction(
        evaluator=lambda coords: first.evaluator(coords) * second.evaluator(coords),
        n=first.n,
        label=f"({first.label})*({second.label})",
        domain=first.domain,
        is_constant=first.is_constant and second.is_constant,
        lipschitz_bound=lipschitz,
        sup_bound=None if None in (first.sup_bound, second.sup_bound) else first.sup_bound * second.sup_bound
        )

def antipodal_bump_pair(center: SpherePoint, radius: float, sharpness: float) -> TestFunction:
    """Sum of two bumps at +center and -center; even under xi -> -xi."""
    pair: TestFunction = linear_combination(
        [(1.0, cap_bump(center, radius, sharpness)), (1.0, cap_bump(-center, radius, sharpness))],
        label=f"antipodal_pair(r={radius!r}, k={sharpness!r})"
        )
    return pair

def random_center(n: int, seed: int, index: int) -> SpherePoint:
    return SpherePoint(uniform_coords(n, 1, chunk_rng(seed, STREAM_SUITE, index))[0], normalize=False)

def standard_suite(n: int = 1, seed: int = 0) -> list[TestFunction]:
    """
    Fixed reproducible suite: a constant, four coordinates, three cap bumps,
    two perturbed constants and two random first-order combinations.
    """
    suite: list[TestFunction] = [constant(1.0, n)]
    suite.extend(coordinate(i, n) for i in range(1, min(4, 2 * n + 2) + 1))
    suite.extend(
        cap_bump(random_center(n, seed, index), radius=radius, sharpness=1.0)
        for index, radius in enumerate((0.8, 1.2, 1.6))
        )
    suite.append(perturbed_constant(0.3, coordinate(1, n)))
    suite.append(perturbed_constant(-0.2, coordinate(2, n)))

    rng: np.random.Generator = chunk_rng(seed, STREAM_SUITE, 100)
    for index in range(2):
        weights: np.ndarray = rng.standard_normal(2 * n + 2)
        weights /= np.linalg.norm(weights)
        suite.append(linear_combination(
            [(float(weight), coordinate(i + 1, n)) for i, weight in enumerate(weights)],
            label=f"harmonic_combo({index})"
            ))

    return suite

def heisenberg_function(evaluator: Evaluator, n: int, label: str, is_constant: bool = False) -> TestFunction:
    return TestFunction(evaluator=evaluator, n=n, label=label, domain=Domain.HEISENBERG, is_constant=is_constant)

def heisenberg_suite(n: int = 1) -> list[TestFunction]:
    """Ten smooth functions on H^n for local checks on gauge balls."""
    return [
        heisenberg_function(lambda c: np.ones(c.shape[:-1]), n, "1", is_constant=True),
        heisenberg_function(lambda c: c[..., -1], n, "t"),
        heisenberg_function(lambda c: c[..., 0], n, "x_1"),
        heisenberg_function(lambda c: c[..., n], n, "y_1"),
        heisenberg_function(lambda c: np.sum(c[..., :-1] ** 2, axis=-1), n, "|z|^2"),
        heisenberg_function(lambda c: np.exp(-np.sum(c[..., :-1] ** 2, axis=-1) - c[..., -1] ** 2), n, "exp(-|z|^2-t^2)"),
        heisenberg_function(lambda c: np.sin(c[..., 0]), n, "sin(x_1)"),
        heisenberg_function(lambda c: np.cos(c[..., -1]) * c[..., n], n, "cos(t)*y_1"),
        heisenberg_function(lambda c: c[..., 0] * c[..., n], n, "x_1*y_1"),
        heisenberg_function(lambda c: np.arctan(c[..., -1] + c[..., 0]), n, "arctan(t+x_1)")
        ]
