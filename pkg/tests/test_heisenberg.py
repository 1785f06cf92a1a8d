import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats, lists

from crsobolev.exceptions import DimensionMismatchError
from crsobolev.geometry.heisenberg import (
    ball_volume,
    ball_volume_exact,
    ball_volume_grid,
    ball_volume_mc,
    dilate,
    distance,
    group_inverse,
    group_law,
    koranyi_gauge,
    sample_ball
    )
from crsobolev.geometry.heisenberg_point import HeisenbergPoint

coordinates = floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)
points = lists(coordinates, min_size=3, max_size=3).map(HeisenbergPoint)
factors = floats(min_value=0.1, max_value=10.0)

@given(points, points, points)
def test_group_law_is_associative(a: HeisenbergPoint, b: HeisenbergPoint, c: HeisenbergPoint) -> None:
    left: HeisenbergPoint = group_law(group_law(a, b), c)
    right: HeisenbergPoint = group_law(a, group_law(b, c))
    assert np.allclose(left.coords, right.coords, rtol=1e-12, atol=1e-9)

@given(points)
def test_group_inverse_cancels(a: HeisenbergPoint) -> None:
    assert np.allclose(group_law(a, group_inverse(a)).coords, 0.0, atol=1e-12)
    assert np.allclose(group_law(group_inverse(a), a).coords, 0.0, atol=1e-12)

@given(points)
def test_identity_is_neutral(a: HeisenbergPoint) -> None:
    assert group_law(a, HeisenbergPoint.identity(1)) == a

@given(factors, points)
def test_gauge_is_homogeneous(lam: float, a: HeisenbergPoint) -> None:
    assert math.isclose(koranyi_gauge(dilate(lam, a)), lam * koranyi_gauge(a), rel_tol=1e-9, abs_tol=1e-12)

@given(factors, points, points)
def test_dilation_is_an_automorphism(lam: float, a: HeisenbergPoint, b: HeisenbergPoint) -> None:
    left: HeisenbergPoint = dilate(lam, group_law(a, b))
    right: HeisenbergPoint = group_law(dilate(lam, a), dilate(lam, b))
    assert np.allclose(left.coords, right.coords, rtol=1e-9, atol=1e-9)

@given(points, points, points)
def test_distance_is_left_invariant(g: HeisenbergPoint, a: HeisenbergPoint, b: HeisenbergPoint) -> None:
    assert math.isclose(distance(group_law(g, a), group_law(g, b)), distance(a, b), rel_tol=1e-7, abs_tol=1e-5)

@given(points, points)
def test_distance_is_symmetric(a: HeisenbergPoint, b: HeisenbergPoint) -> None:
    assert math.isclose(distance(a, b), distance(b, a), rel_tol=1e-12, abs_tol=1e-12)

@given(points, points, points)
def test_distance_triangle_inequality(a: HeisenbergPoint, b: HeisenbergPoint, c: HeisenbergPoint) -> None:
    assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-7

def test_distance_to_self_is_zero() -> None:
    a: HeisenbergPoint = HeisenbergPoint.from_complex([1.0 + 2.0j], 0.5)
    assert distance(a, a) == 0.0

@pytest.mark.parametrize("lam", [0.0, -1.0])
def test_dilate_rejects_non_positive_factor(lam: float) -> None:
    with pytest.raises(ValueError):
        dilate(lam, HeisenbergPoint.identity(1))

def test_group_law_rejects_mixed_dimensions() -> None:
    with pytest.raises(DimensionMismatchError):
        group_law(HeisenbergPoint.identity(1), HeisenbergPoint.identity(2))

@pytest.mark.parametrize("coords", [[1.0, 2.0], [1.0, 2.0, 3.0, 4.0], [0.0, 0.0, math.nan]])
def test_point_rejects_bad_coordinates(coords: list[float]) -> None:
    with pytest.raises(ValueError):
        HeisenbergPoint(coords)

def test_point_batches_vectorize() -> None:
    batch: HeisenbergPoint = HeisenbergPoint(np.arange(12.0).reshape(4, 3))
    assert len(batch) == 4
    assert batch.batch_shape == (4,)
    assert koranyi_gauge(batch).shape == (4,)
    assert batch[1] == HeisenbergPoint([3.0, 4.0, 5.0])

@pytest.mark.parametrize("n", [1, 2, 3])
def test_ball_volume_matches_closed_form(n: int) -> None:
    assert ball_volume(n) == pytest.approx(ball_volume_exact(n), rel=1e-8)

def test_unit_ball_volume_for_n_1() -> None:
    assert ball_volume(1) == pytest.approx(math.pi**2 / 2, rel=1e-10)

def test_ball_volume_grid_oracle() -> None:
    assert ball_volume_grid(1) == pytest.approx(ball_volume(1), rel=0.01)

def test_ball_volume_grid_needs_n_1() -> None:
    with pytest.raises(ValueError):
        ball_volume_grid(2)

@pytest.mark.parametrize("r", [0.5, 2.0])
def test_ball_volume_scales_with_homogeneous_dimension(r: float, cfg) -> None:
    estimate = ball_volume_mc(r, 1, cfg)
    assert abs(estimate.value / r**4 - ball_volume(1)) <= 4.0 * estimate.std_error / r**4

def test_sample_ball_stays_inside_and_is_reproducible() -> None:
    center: HeisenbergPoint = HeisenbergPoint([0.3, -0.2, 1.0])
    first: HeisenbergPoint = sample_ball(1.5, center, 500, seed=3)
    second: HeisenbergPoint = sample_ball(1.5, center, 500, seed=3)

    assert first == second
    assert len(first) == 500
    assert np.all(distance(first, center) <= 1.5 * (1.0 + 1e-12))

@pytest.mark.parametrize("r, count", [(0.0, 10), (1.0, 0)])
def test_sample_ball_rejects_bad_arguments(r: float, count: int) -> None:
    with pytest.raises(ValueError):
        sample_ball(r, HeisenbergPoint.identity(1), count, seed=0)
