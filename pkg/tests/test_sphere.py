import math

import numpy as np
import pytest

from crsobolev.exceptions import DegenerateInputError, DimensionMismatchError
from crsobolev.functions.families import constant, coordinate
from crsobolev.geometry.sphere import (
    apply_unitary,
    cr_distance,
    mean,
    omega_exact,
    quasi_triangle_constant,
    random_unitary,
    sample_uniform,
    volume
    )
from crsobolev.geometry.sphere_point import SpherePoint

@pytest.mark.parametrize("n, expected", [(1, 2 * math.pi**2), (2, math.pi**3), (3, math.pi**4 / 3)])
def test_volume_matches_round_area(n: int, expected: float) -> None:
    measure = volume(n)
    assert measure.omega == pytest.approx(expected, rel=1e-6)
    assert measure.density_ratio == pytest.approx(1.0, rel=1e-6)
    assert omega_exact(n) == pytest.approx(expected, rel=1e-12)

def test_volume_rejects_n_0() -> None:
    with pytest.raises(ValueError):
        volume(0)

def test_distance_to_self_and_antipode() -> None:
    zeta: SpherePoint = SpherePoint.from_complex([0.6, 0.8j])
    assert cr_distance(zeta, zeta) == pytest.approx(0.0, abs=1e-12)
    assert cr_distance(zeta, -zeta) == pytest.approx(2.0, rel=1e-12)

def test_distance_rejects_mixed_dimensions() -> None:
    with pytest.raises(DimensionMismatchError):
        cr_distance(SpherePoint.north_pole(1), SpherePoint.north_pole(2))

def test_distance_is_unitarily_invariant() -> None:
    rng: np.random.Generator = np.random.default_rng(5)
    a: SpherePoint = sample_uniform(2, 200, seed=1)
    b: SpherePoint = sample_uniform(2, 200, seed=2)
    matrix: np.ndarray = random_unitary(2, rng)

    assert np.allclose(matrix @ matrix.conj().T, np.eye(3), atol=1e-12)
    assert np.allclose(cr_distance(apply_unitary(matrix, a), apply_unitary(matrix, b)), cr_distance(a, b), atol=1e-10)

def test_distance_is_a_metric_on_samples() -> None:
    assert 1.0 <= quasi_triangle_constant(1, 20000, seed=4) <= 1.0 + 1e-6

def test_sample_uniform_lands_on_sphere() -> None:
    points: SpherePoint = sample_uniform(1, 5000, seed=9)
    assert len(points) == 5000
    assert np.allclose(np.linalg.norm(points.coords, axis=1), 1.0, atol=1e-12)
    assert points == sample_uniform(1, 5000, seed=9)

def test_sample_uniform_rejects_empty() -> None:
    with pytest.raises(ValueError):
        sample_uniform(1, 0, seed=0)

def test_point_normalizes_and_rejects_zero() -> None:
    assert np.allclose(SpherePoint([3.0, 0.0, 4.0, 0.0]).coords, [0.6, 0.0, 0.8, 0.0])
    with pytest.raises(DegenerateInputError):
        SpherePoint([0.0, 0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        SpherePoint([1.0, 0.0, 0.0])

def test_poles() -> None:
    assert SpherePoint.north_pole(1).w.tolist() == [0.0, 1.0]
    assert SpherePoint.south_pole(1) == -SpherePoint.north_pole(1)

def test_mean_of_constant_is_exact(cfg) -> None:
    estimate = mean(constant(2.5, n=1), cfg)
    assert estimate.value == 2.5
    assert estimate.std_error == 0.0

def test_mean_of_coordinate_vanishes(cfg) -> None:
    estimate = mean(coordinate(1, n=1), cfg)
    assert abs(estimate.value) <= 4.0 * estimate.std_error + 1e-3
