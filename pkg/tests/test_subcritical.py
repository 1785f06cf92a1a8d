import pytest

from crsobolev.enums import InequalityForm
from crsobolev.functions.families import cap_bump, constant, coordinate, perturbed_constant
from crsobolev.geometry.sphere_point import SpherePoint
from crsobolev.lab.critical_params import CriticalParams
from crsobolev.lab.subcritical import interpolation_exponent, subcritical_check, subcritical_constants

def test_interpolation_exponent_range(params: CriticalParams) -> None:
    assert interpolation_exponent(params.p, params) == 0.0
    r: float = (params.p + params.p_star) / 2
    assert 0.0 < interpolation_exponent(r, params) < 1.0
    for bad in (1.5, params.p_star):
        with pytest.raises(ValueError):
            interpolation_exponent(bad, params)

def test_constants_at_r_equal_p(params: CriticalParams) -> None:
    theta, C = subcritical_constants(params.p, 0.1, 1.0, params)
    assert theta == 0.0
    assert C == pytest.approx(1.0)

def test_power_form_constant(params: CriticalParams) -> None:
    r: float = 2.3
    eps: float = 0.2
    theta, C_power = subcritical_constants(r, eps, 1.0, params, InequalityForm.POWER)
    _, C_linear = subcritical_constants(r, (eps / 2.0) ** 0.5, 1.0, params, InequalityForm.LINEAR)
    assert C_power == pytest.approx(2.0 * C_linear**2)

def test_smaller_eps_costs_a_larger_constant(params: CriticalParams) -> None:
    _, loose = subcritical_constants(2.3, 0.5, 1.0, params)
    _, tight = subcritical_constants(2.3, 0.05, 1.0, params)
    assert tight > loose

@pytest.mark.parametrize("eps, A0", [(0.0, 1.0), (0.1, -1.0)])
def test_constants_guards(params: CriticalParams, eps: float, A0: float) -> None:
    with pytest.raises(ValueError):
        subcritical_constants(2.3, eps, A0, params)

@pytest.mark.parametrize("form", list(InequalityForm))
def test_subcritical_check_holds_on_suite(params: CriticalParams, cfg, form: InequalityForm) -> None:
    family = [
        constant(1.0),
        coordinate(1),
        cap_bump(SpherePoint.north_pole(1), 1.2, 1.0),
        perturbed_constant(0.3, coordinate(2))
        ]
    report = subcritical_check(2.3, 0.1, 10.0, params, family, cfg, form)
    assert len(report.rows) == 4
    assert not report.failed
