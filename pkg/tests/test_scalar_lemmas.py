import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats

from crsobolev.enums import Verdict
from crsobolev.lab.critical_params import CriticalParams
from crsobolev.lab.scalar_lemmas import (
    scalar_F,
    scalar_F_check,
    scalar_F_sup,
    scalar_phi,
    scalar_phi_check,
    scalar_suite,
    young_boundary,
    young_split_check,
    young_split_constants,
    young_split_report
    )
from crsobolev.lab.thresholds import thresholds

@pytest.mark.parametrize("q", [8 / 3, 3.0])
def test_phi_check_passes(q: float) -> None:
    v: np.ndarray = np.random.default_rng(1).standard_normal(64)
    report = scalar_phi_check(q, v, trials=2000)
    assert report.verdicts == {
        "phi_zero": Verdict.PASS,
        "phi_prime_zero": Verdict.PASS,
        "second_difference": Verdict.PASS,
        "inequality": Verdict.PASS
        }

def test_phi_of_zero_vector_is_constant() -> None:
    weights: np.ndarray = np.full(4, 0.25)
    assert np.allclose(scalar_phi(np.linspace(-1.0, 1.0, 5), np.zeros(4), weights, 3.0), 1.0)

@pytest.mark.parametrize("q, v", [(1.5, [1.0, -1.0]), (3.0, []), (3.0, [1.0, np.nan])])
def test_phi_check_rejects_bad_input(q: float, v: list[float]) -> None:
    with pytest.raises(ValueError):
        scalar_phi_check(q, v, trials=10)

@given(floats(min_value=-1e6, max_value=1e6))
def test_F_is_bounded_by_its_sup(t: float) -> None:
    assert float(scalar_F(t, 1.5)) <= scalar_F_sup(1.5) + 1e-9

def test_F_limits() -> None:
    assert float(scalar_F(0.0, 1.5)) == 0.0
    assert scalar_F_sup(1.5) >= 1.0
    with pytest.raises(ValueError):
        scalar_F_sup(2.0)

def test_F_check_passes() -> None:
    assert scalar_F_check(1.5, trials=5000).verdicts["inequality"] is Verdict.PASS

@pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
def test_young_split_check_passes(p: float) -> None:
    assert young_split_check(p, trials=5000).verdicts["inequality"] is Verdict.PASS

def test_young_split_check_rejects_p_below_1() -> None:
    with pytest.raises(ValueError):
        young_split_check(0.5)

def test_young_split_constants(params: CriticalParams) -> None:
    threshold: float = thresholds(params).power_threshold
    B: float = 1.2 * threshold
    tau, A_B = young_split_constants(B, 1.5, params)

    assert tau >= young_boundary(B, params)
    assert (1.0 + 1.0 / tau) ** (params.p - 1.0) * threshold < B
    assert A_B == pytest.approx((1.0 + tau) ** (params.p - 1.0) * 1.5**params.p)
    assert young_split_report(B, 1.5, params).flags["tau_beyond_boundary"]

@pytest.mark.parametrize("B_factor, A0", [(1.0, 1.0), (0.5, 1.0), (1.2, -1.0)])
def test_young_split_constants_guards(params: CriticalParams, B_factor: float, A0: float) -> None:
    with pytest.raises(ValueError):
        young_split_constants(B_factor * thresholds(params).power_threshold, A0, params)

def test_scalar_suite(params: CriticalParams) -> None:
    report = scalar_suite(params, trials=2000)
    assert set(report.verdicts) >= {"phi.second_difference", "F.inequality", "young.inequality"}
    assert not report.failed
