import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats, lists

from crsobolev.exceptions import PoleProximityError, SingularEvaluationError
from crsobolev.functions.families import coordinate, heisenberg_function
from crsobolev.geometry.cayley import (
    CayleyContext,
    forward,
    inverse,
    jacobian,
    jacobian_integral_mc,
    kernel,
    pullback,
    pushforward,
    sample_weighted
    )
from crsobolev.geometry.heisenberg_point import HeisenbergPoint
from crsobolev.geometry.sphere import cr_distance, sample_uniform
from crsobolev.geometry.sphere_point import SpherePoint

coordinates = floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
points = lists(coordinates, min_size=3, max_size=3).map(HeisenbergPoint)

@given(points)
def test_inverse_lands_on_sphere_and_round_trips(a: HeisenbergPoint) -> None:
    zeta: SpherePoint = inverse(a)
    assert np.linalg.norm(zeta.coords) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(forward(zeta).coords, a.coords, rtol=1e-9, atol=1e-9)

def test_sphere_round_trip_away_from_pole() -> None:
    zeta: SpherePoint = sample_uniform(2, 2000, seed=3)
    assert np.allclose(inverse(forward(zeta)).coords, zeta.coords, atol=1e-10)

def test_north_pole_maps_to_identity() -> None:
    assert np.allclose(forward(SpherePoint.north_pole(1)).coords, 0.0, atol=1e-15)

def test_forward_refuses_south_pole() -> None:
    with pytest.raises(PoleProximityError):
        forward(SpherePoint.south_pole(1))

def test_context_rejects_non_positive_guard() -> None:
    with pytest.raises(ValueError):
        CayleyContext(1, pole_guard=0.0)

@pytest.mark.parametrize("n", [1, 2])
def test_jacobian_at_identity(n: int) -> None:
    assert jacobian(HeisenbergPoint.identity(n)) == pytest.approx(2.0 ** (2 * n + 1))

def test_jacobian_integrates_to_sphere_volume(cfg) -> None:
    estimate = jacobian_integral_mc(1, cfg)
    assert abs(estimate.value - 2 * math.pi**2) <= 4.0 * estimate.std_error + 1e-6

def test_kernel_is_symmetric_and_singular_on_diagonal() -> None:
    a: HeisenbergPoint = HeisenbergPoint([0.3, -1.0, 2.0])
    b: HeisenbergPoint = HeisenbergPoint([1.0, 0.5, -0.5])

    assert kernel(a, b, 0.5, 2.0) == pytest.approx(kernel(b, a, 0.5, 2.0), rel=1e-12)
    assert kernel(a, b, 0.5, 2.0) > 0.0
    with pytest.raises(SingularEvaluationError):
        kernel(a, a, 0.5, 2.0)

def test_kernel_matches_hand_composition() -> None:
    a: HeisenbergPoint = HeisenbergPoint.identity(1)
    b: HeisenbergPoint = HeisenbergPoint([1.0, 0.0, 0.0])

    d: float = cr_distance(inverse(a), inverse(b))
    expected: float = jacobian(a) * jacobian(b) / d**5

    assert (jacobian(a), jacobian(b), d) == pytest.approx((8.0, 0.5, math.sqrt(2.0)), rel=1e-12)
    assert kernel(a, b, 0.5, 2.0) == pytest.approx(expected, rel=1e-12)
    assert kernel(a, b, 0.5, 2.0) == pytest.approx(1 / math.sqrt(2.0), rel=1e-12)

def test_pushforward_composes_with_inverse() -> None:
    u = coordinate(2, n=1)
    U = pushforward(u)
    a: HeisenbergPoint = HeisenbergPoint([0.4, 1.2, -0.7])

    assert U(a.coords) == pytest.approx(u(inverse(a).coords))
    with pytest.raises(ValueError):
        pushforward(U)

def test_pullback_composes_with_forward_and_zeroes_pole() -> None:
    U = heisenberg_function(lambda coords: 1.0 + coords[..., -1] ** 2, n=1, label="1+t^2")
    u = pullback(U)
    zeta: SpherePoint = SpherePoint.from_complex([0.6, 0.8j])

    assert u(zeta.coords) == pytest.approx(U(forward(zeta).coords))
    assert u(SpherePoint.south_pole(1).coords) == 0.0
    with pytest.raises(ValueError):
        pullback(coordinate(1, n=1))

def test_weighted_samples_push_to_uniform_sphere() -> None:
    zeta: SpherePoint = inverse(sample_weighted(1, 40000, seed=8))
    last: np.ndarray = zeta.w[:, 1]

    assert abs(np.mean(last.real)) < 0.01
    assert np.mean(np.abs(last) ** 2) == pytest.approx(0.5, abs=0.01)
    assert np.mean(zeta.coords[:, 0] ** 2) == pytest.approx(0.25, abs=0.01)
