import pytest

from crsobolev.enums import Verdict
from crsobolev.estimators.mc_config import McConfig
from crsobolev.functions.families import cap_bump, constant, coordinate, heisenberg_suite
from crsobolev.geometry.heisenberg import ball_volume
from crsobolev.geometry.heisenberg_point import HeisenbergPoint
from crsobolev.geometry.local_poincare import local_poincare_check, local_poincare_grid, poincare_constant
from crsobolev.geometry.sphere_point import SpherePoint
from crsobolev.lab.critical_params import CriticalParams
from crsobolev.lab.poincare import poincare_constants

LOCAL_CFG: McConfig = McConfig(samples=1024, seed=6, chunk=512)

def test_poincare_constant() -> None:
    assert poincare_constant(1, 0.5, 2.0) == pytest.approx(2.0**5 / ball_volume(1))

def test_local_poincare_holds_on_every_chunk() -> None:
    U = heisenberg_suite(1)[1]
    report = local_poincare_check(U, 1.0, HeisenbergPoint([0.2, -0.1, 0.5]), 0.5, 2.0, LOCAL_CFG)
    assert report.verdicts["inequality"] is Verdict.PASS
    assert report.flags["strict_on_every_chunk"]

def test_local_poincare_constant_function_is_boundary() -> None:
    report = local_poincare_check(heisenberg_suite(1)[0], 0.5, HeisenbergPoint.identity(1), 0.5, 2.0, LOCAL_CFG)
    assert report.get_quantity("slack").value == 0.0
    assert report.verdicts["slack"] is Verdict.BOUNDARY

@pytest.mark.parametrize("r, s, p", [(0.0, 0.5, 2.0), (1.0, 0.5, 0.5), (1.0, 1.0, 2.0)])
def test_local_poincare_guards(r: float, s: float, p: float) -> None:
    with pytest.raises(ValueError):
        local_poincare_check(heisenberg_suite(1)[1], r, HeisenbergPoint.identity(1), s, p, LOCAL_CFG)

def test_local_poincare_needs_heisenberg_function() -> None:
    with pytest.raises(ValueError):
        local_poincare_check(coordinate(1), 1.0, HeisenbergPoint.identity(1), 0.5, 2.0, LOCAL_CFG)

def test_local_poincare_grid() -> None:
    U = heisenberg_suite(1)[2]
    sides = local_poincare_grid(U, 1.0, HeisenbergPoint.identity(1), 0.5, 2.0, resolution=10)
    assert sides.deviation > 0.0
    assert poincare_constant(1, 0.5, 2.0) * sides.double_integral >= sides.deviation
    with pytest.raises(ValueError):
        local_poincare_grid(heisenberg_suite(2)[1], 1.0, HeisenbergPoint.identity(2), 0.5, 2.0)

def test_poincare_constants(params: CriticalParams, cfg) -> None:
    suite = [constant(1.0), coordinate(1), cap_bump(SpherePoint.north_pole(1), 1.2, 1.0)]
    report = poincare_constants(params, suite, cfg)

    assert len(report.rows) == 2
    assert report.get_quantity("C_P").value > 0.0
    assert report.get_quantity("C_M").value > 0.0
    assert report.get_quantity("A_1").value > 0.0
    assert report.verdicts["mean_zero_sobolev"] is Verdict.PASS
    assert "endpoint_power" in report.verdicts
