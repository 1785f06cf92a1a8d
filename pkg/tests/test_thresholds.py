import pytest

from crsobolev.enums import InequalityForm, Verdict
from crsobolev.lab.critical_params import CriticalParams
from crsobolev.lab.thresholds import (
    certificate_flips,
    constant_residual,
    constant_violation_certificate,
    threshold_identity_error,
    thresholds
    )

def test_thresholds_for_n_1(params: CriticalParams) -> None:
    report = thresholds(params)
    assert report.linear_threshold == pytest.approx(0.6887, abs=1e-4)
    assert report.power_threshold == pytest.approx(0.4744, abs=1e-4)
    assert report.threshold(InequalityForm.POWER) == report.power_threshold

@pytest.mark.parametrize("n, s, p", [(1, 0.5, 2.0), (2, 0.3, 1.5), (3, 0.9, 4.0)])
def test_threshold_identity(n: int, s: float, p: float) -> None:
    assert threshold_identity_error(thresholds(CriticalParams(n, s, p))) <= 1e-12

@pytest.mark.parametrize("form", list(InequalityForm))
def test_certificate_flips_at_threshold(params: CriticalParams, form: InequalityForm) -> None:
    assert certificate_flips(params, form) == {"below": Verdict.VIOLATED, "at": Verdict.BOUNDARY, "above": Verdict.SATISFIED}

@pytest.mark.parametrize("form", list(InequalityForm))
def test_constant_residual_sign(params: CriticalParams, form: InequalityForm) -> None:
    threshold: float = thresholds(params).threshold(form)
    assert constant_residual(0.9 * threshold, form, params) < 0
    assert constant_residual(threshold, form, params) == pytest.approx(0.0, abs=1e-12)
    assert constant_residual(1.1 * threshold, form, params) > 0

def test_certificate_report_contents(params: CriticalParams) -> None:
    report = constant_violation_certificate(0.5, InequalityForm.LINEAR, params)
    assert report.verdicts["constant"] is Verdict.VIOLATED
    assert report.get_quantity("residual").value < 0
    assert report.failed

@pytest.mark.parametrize("n, s, p", [(1, 0.0, 2.0), (1, 1.0, 2.0), (1, 0.5, 1.0), (1, 0.5, 4.0), (0, 0.5, 2.0)])
def test_critical_params_validation(n: int, s: float, p: float) -> None:
    with pytest.raises(ValueError):
        CriticalParams(n, s, p)

def test_critical_params_exponents(params: CriticalParams) -> None:
    assert params.Q == 4
    assert params.p_star == pytest.approx(8 / 3)
    assert params.alpha == pytest.approx(0.75)
