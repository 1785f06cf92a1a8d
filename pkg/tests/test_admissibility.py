import math

import pytest

from crsobolev.enums import InequalityForm, Verdict
from crsobolev.functions.families import cap_bump, constant, coordinate, perturbed_constant
from crsobolev.geometry.sphere_point import SpherePoint
from crsobolev.lab.admissibility import admissibility_probe, admissibility_scan, endpoint_constant
from crsobolev.lab.critical_params import CriticalParams
from crsobolev.lab.thresholds import thresholds
from crsobolev.optimizer.param_family import span_family

SUITE = [
    constant(1.0),
    coordinate(1),
    cap_bump(SpherePoint.north_pole(1), 1.2, 1.0),
    perturbed_constant(0.3, coordinate(2))
    ]

@pytest.mark.parametrize("form", list(InequalityForm))
def test_scan_over_suite(params: CriticalParams, cfg, form: InequalityForm) -> None:
    T: float = thresholds(params).threshold(form)
    report = admissibility_scan([2.0 * T, 0.9 * T, T], form, None, 10, params, cfg, SUITE)

    assert [row["B"] for row in report.rows] == [0.9 * T, T, 2.0 * T]
    assert report.verdicts[f"admissibility[B={0.9 * T:g}]"] is Verdict.UNBOUNDED
    assert report.verdicts[f"admissibility[B={T:g}]"] is Verdict.BOUNDED
    assert report.get_quantity(f"A_min[B={0.9 * T:g}]").value == math.inf
    assert report.verdicts["monotone"] is Verdict.PASS
    assert not report.failed

def test_admissibility_search_with_optimizer(params: CriticalParams, cfg) -> None:
    T: float = thresholds(params).linear_threshold
    report = admissibility_probe(1.5 * T, InequalityForm.LINEAR, span_family(1, bumps=0), 12, params, cfg.replace(samples=4096), SUITE[:2])
    assert report.name == "admissibility_probe"
    assert report.params["B"] == 1.5 * T
    assert report.verdicts[f"admissibility[B={1.5 * T:g}]"] is Verdict.BOUNDED
    assert report.verdicts[f"residuals[B={1.5 * T:g}]"] is Verdict.PASS

def test_endpoint_constant_for_q_at_least_2(params: CriticalParams) -> None:
    assert endpoint_constant(1.5, params) == pytest.approx((5 / 3) * 1.5**2)

def test_endpoint_constant_for_q_below_2() -> None:
    params: CriticalParams = CriticalParams(1, 0.5, 1.2)
    assert params.q < 2
    assert endpoint_constant(1.0, params, C_q=2.0) == pytest.approx(2.0 ** (params.p / params.q))

def test_endpoint_constant_guards(params: CriticalParams) -> None:
    with pytest.raises(ValueError):
        endpoint_constant(-1.0, params)
    with pytest.raises(ValueError):
        endpoint_constant(1.0, CriticalParams(1, 0.5, 3.0))
