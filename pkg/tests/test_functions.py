import typing

import numpy as np
import pytest

from crsobolev.enums import Domain
from crsobolev.exceptions import PositivityError, RangeError
from crsobolev.functions.families import (
    antipodal_bump_pair,
    cap_bump,
    constant,
    coordinate,
    heisenberg_function,
    heisenberg_suite,
    linear_combination,
    perturbed_constant,
    product,
    standard_suite
    )
from crsobolev.functions.harmonics import HarmonicIndex, dim_harmonic, dim_harmonic_bruteforce
from crsobolev.functions.test_function import Evaluator, TestFunction
from crsobolev.geometry.sphere import cr_distance, sample_uniform
from crsobolev.geometry.sphere_point import SpherePoint

def test_constant_flags() -> None:
    u: TestFunction = constant(3.0, n=2)
    assert u.is_constant
    assert not u.is_mean_zero
    assert u.constant_value == 3.0
    assert u.dim == 6
    assert constant(0.0).is_mean_zero

def test_constant_value_of_non_constant_raises() -> None:
    with pytest.raises(ValueError):
        coordinate(1).constant_value

@pytest.mark.parametrize("i", [0, 5])
def test_coordinate_index_range(i: int) -> None:
    with pytest.raises(ValueError):
        coordinate(i, n=1)

def test_coordinate_reads_real_parts_then_imaginary_parts() -> None:
    zeta: SpherePoint = SpherePoint.from_complex([0.6, 0.8j])
    assert coordinate(1)(zeta) == pytest.approx(0.6)
    assert coordinate(4)(zeta) == pytest.approx(0.8)

def test_wrong_coordinate_count_raises() -> None:
    with pytest.raises(ValueError):
        coordinate(1)(np.zeros(3))

def test_cap_bump_support_sup_and_lipschitz() -> None:
    center: SpherePoint = SpherePoint.north_pole(1)
    u: TestFunction = cap_bump(center, radius=0.8, sharpness=1.0)
    points: SpherePoint = sample_uniform(1, 4000, seed=2)
    values: np.ndarray = u(points)

    assert u(center) == pytest.approx(np.exp(-1.0))
    assert np.all(values <= u.sup_bound + 1e-15)
    assert np.all(values[cr_distance(points, center) >= 0.8] == 0.0)

    others: SpherePoint = sample_uniform(1, 4000, seed=3)
    d: np.ndarray = cr_distance(points, others)
    ratios: np.ndarray = np.abs(values - u(others))[d > 0] / d[d > 0]
    assert np.max(ratios) <= u.lipschitz_bound

@pytest.mark.parametrize("radius, sharpness", [(0.0, 1.0), (2.0, 1.0), (1.0, 0.0)])
def test_cap_bump_rejects_bad_shape(radius: float, sharpness: float) -> None:
    with pytest.raises(ValueError):
        cap_bump(SpherePoint.north_pole(1), radius, sharpness)

def test_antipodal_pair_is_even() -> None:
    u: TestFunction = antipodal_bump_pair(SpherePoint.from_complex([0.6, 0.8j]), radius=1.0, sharpness=1.0)
    points: SpherePoint = sample_uniform(1, 1000, seed=1)
    assert np.allclose(u(points), u(-points))

def test_perturbed_constant() -> None:
    phi: TestFunction = coordinate(1)
    u: TestFunction = perturbed_constant(0.25, phi)
    zeta: SpherePoint = SpherePoint.from_complex([0.6, 0.8j])

    assert u(zeta) == pytest.approx(1.15)
    assert u.lipschitz_bound == pytest.approx(0.25)
    assert perturbed_constant(0.0, phi).is_constant

def test_perturbed_constant_guards() -> None:
    with pytest.raises(ValueError):
        perturbed_constant(0.1, constant(1.0))
    with pytest.raises(PositivityError):
        perturbed_constant(1.5, coordinate(1))

def test_linear_combination_and_product() -> None:
    zeta: SpherePoint = SpherePoint.from_complex([0.6, 0.8j])
    combo: TestFunction = linear_combination([(2.0, coordinate(1)), (-1.0, coordinate(4))], offset=0.5)

    assert combo(zeta) == pytest.approx(0.5 + 1.2 - 0.8)
    assert not combo.is_mean_zero
    assert combo.lipschitz_bound == pytest.approx(3.0)
    assert linear_combination([(2.0, constant(1.0))]).is_constant
    assert product(coordinate(1), coordinate(4))(zeta) == pytest.approx(0.48)
    with pytest.raises(ValueError):
        linear_combination([])

def test_scaled_and_shifted() -> None:
    u: TestFunction = coordinate(1).scaled(-2.0).shifted(1.0)
    assert u(SpherePoint.from_complex([0.6, 0.8j])) == pytest.approx(-0.2)
    assert u.sup_bound == pytest.approx(3.0)
    assert not u.is_mean_zero

def test_suites() -> None:
    suite: list[TestFunction] = standard_suite(1, seed=0)
    assert len(suite) == 12
    assert suite[0].is_constant
    assert [u.label for u in suite] == [u.label for u in standard_suite(1, seed=0)]

    local: list[TestFunction] = heisenberg_suite(1)
    assert len(local) == 10
    assert all(u.domain is Domain.HEISENBERG for u in local)
    assert local[0].is_constant and local[0].constant_value == 1.0

@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("j", range(5))
@pytest.mark.parametrize("k", range(5))
def test_harmonic_dimension_matches_enumeration(n: int, j: int, k: int) -> None:
    idx: HarmonicIndex = HarmonicIndex(j, k)
    assert dim_harmonic(idx, n) == dim_harmonic_bruteforce(idx, n)

@pytest.mark.parametrize("j, k, n, expected", [(0, 0, 1, 1), (1, 0, 1, 2), (1, 1, 1, 3), (1, 0, 2, 3), (1, 1, 2, 8)])
def test_harmonic_dimension_values(j: int, k: int, n: int, expected: int) -> None:
    assert dim_harmonic(HarmonicIndex(j, k), n) == expected

def test_harmonic_dimension_overflow() -> None:
    with pytest.raises(RangeError):
        dim_harmonic(HarmonicIndex(40, 40), 40)

def test_harmonic_index_validation() -> None:
    with pytest.raises(ValueError):
        HarmonicIndex(-1, 0)
    with pytest.raises(ValueError):
        dim_harmonic(HarmonicIndex(1, 1), 0)

def test_heisenberg_function_takes_an_evaluator() -> None:
    assert typing.get_type_hints(heisenberg_function)["evaluator"] == Evaluator
    U: TestFunction = heisenberg_function(lambda coords: coords[..., 0], n=1, label="x")
    assert U.domain is Domain.HEISENBERG
    assert U(np.array([[2.0, 0.0, 1.0]])) == pytest.approx([2.0])
