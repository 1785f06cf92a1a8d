import pytest

from crsobolev.enums import InequalityForm, Verdict
from crsobolev.estimators.mc_config import McConfig
from crsobolev.exceptions import ConfigurationError
from crsobolev.functions.families import cap_bump, constant, coordinate
from crsobolev.functions.test_function import TestFunction
from crsobolev.geometry.sphere_point import SpherePoint
from crsobolev.lab.critical_params import CriticalParams
from crsobolev.lab.cutoff import cutoff_constants, cutoff_estimate_check
from crsobolev.lab.equivalence import change_of_variables_suite, round_trip_errors, side_equivalence_check, verify_cayley
from crsobolev.lab.thresholds import thresholds

@pytest.mark.parametrize("n", [1, 2])
def test_round_trips(n: int) -> None:
    sphere_error, heisenberg_error = round_trip_errors(n, count=2000)
    assert sphere_error <= 1e-12
    assert heisenberg_error <= 1e-12

def test_change_of_variables_suite() -> None:
    suite = change_of_variables_suite(1)
    assert [u.label for u in suite][:2] == ["constant(1.0)", "|w_1|^2"]
    assert suite[1](SpherePoint.from_complex([0.6j, 0.8])) == pytest.approx(0.36)

@pytest.mark.slow
def test_verify_cayley(params: CriticalParams) -> None:
    report = verify_cayley(params, [constant(1.0), coordinate(1)], McConfig(samples=1 << 14, seed=3, chunk=1024))
    assert report.verdicts["round_trip_sphere"] is Verdict.PASS
    assert report.verdicts["round_trip_heisenberg"] is Verdict.PASS
    assert report.verdicts["change_of_variables[constant(1.0)]"] is Verdict.PASS
    assert report.verdicts["seminorm_isometry[constant(1.0)]"] is Verdict.PASS
    assert len(report.rows) == 3 + 2 * 2

def test_side_equivalence_on_constants(params: CriticalParams, cfg) -> None:
    T: float = thresholds(params).linear_threshold
    report = side_equivalence_check(params, [constant(1.0)], 1.0, [0.5 * T, 2.0 * T], InequalityForm.LINEAR, cfg)

    assert [row["sphere_verdict"] for row in report.rows] == ["VIOLATED", "SATISFIED"]
    assert [row["weighted_verdict"] for row in report.rows] == ["VIOLATED", "SATISFIED"]
    assert not report.failed

def test_cutoff_constants_need_bounds(params: CriticalParams) -> None:
    with pytest.raises(ConfigurationError):
        cutoff_constants(TestFunction(lambda c: c[..., 0], n=1, label="x"), params)

def test_cutoff_estimate(params: CriticalParams, cfg) -> None:
    phi = cap_bump(SpherePoint.north_pole(1), 1.5, 0.5)
    report = cutoff_estimate_check(phi, coordinate(2), params, cfg)
    assert report.verdicts["cutoff"] is Verdict.PASS
    assert report.get_quantity("kernel_mass").value > 0.0
    assert report.get_quantity("slack").value > 0.0
