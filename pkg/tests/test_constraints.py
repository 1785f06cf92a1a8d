import numpy as np
import pytest

from crsobolev.enums import ConstraintClass, Verdict
from crsobolev.estimators.mc_config import McConfig
from crsobolev.functions.families import antipodal_bump_pair, cap_bump, constant, coordinate
from crsobolev.geometry.sphere import mean, sample_uniform
from crsobolev.geometry.sphere_point import SpherePoint
from crsobolev.lab.constraints import coercive_class_probe, moment_class_check, near_constant_family, project
from crsobolev.lab.critical_params import CriticalParams
from crsobolev.optimizer.param_family import span_family

CENTER: SpherePoint = SpherePoint.from_complex([0.6, 0.8j])

def test_even_functions_have_vanishing_moments(params: CriticalParams, cfg) -> None:
    for u in (constant(1.0), antipodal_bump_pair(CENTER, 0.8, 1.0)):
        report = moment_class_check(u, params, cfg, expected=True)
        assert report.flags["in_class"]
        assert report.verdicts["membership"] is Verdict.PASS
        assert report.get_quantity("moment_1").value == 0.0

def test_single_bump_leaves_the_class(params: CriticalParams, cfg) -> None:
    report = moment_class_check(cap_bump(CENTER, 0.8, 1.0), params, cfg, expected=False)
    assert not report.flags["in_class"]
    assert report.verdicts["membership"] is Verdict.PASS

def test_projection_removes_the_average(cfg) -> None:
    u = project(cap_bump(CENTER, 1.2, 1.0), ConstraintClass.ZERO_AVERAGE, cfg)
    average = mean(u, cfg)
    assert u.is_mean_zero
    assert u.constraint is ConstraintClass.ZERO_AVERAGE
    assert abs(average.value) <= 6.0 * average.std_error + 1e-3

def test_projection_is_idempotent(cfg) -> None:
    u = project(coordinate(1).shifted(0.5), ConstraintClass.ORTHOGONAL_TO_Y, cfg)
    assert project(u, ConstraintClass.ORTHOGONAL_TO_Y, cfg) is u
    assert project(u, ConstraintClass.ZERO_AVERAGE, cfg) is u

@pytest.mark.parametrize("constraint", list(ConstraintClass))
def test_forced_reprojection_changes_nothing(constraint: ConstraintClass, cfg) -> None:
    once = project(cap_bump(CENTER, 1.2, 1.0).shifted(0.3), constraint, cfg)
    twice = project(once, constraint, cfg, force=True)
    cloud = sample_uniform(1, 2000, seed=9)

    assert np.max(np.abs(twice(cloud) - once(cloud))) <= 1e-10

def test_projecting_a_constant_gives_zero(cfg) -> None:
    u = project(constant(3.0), ConstraintClass.ZERO_AVERAGE, cfg)
    assert u.constant_value == 0.0

def test_near_constant_family() -> None:
    family = near_constant_family(1, seed=0)
    assert [u.label for u in family] == ["1+0.1*bump", "1+0.01*bump", "1+0.001*bump"]
    assert not any(u.is_constant for u in family)

@pytest.mark.parametrize("constraint", list(ConstraintClass))
def test_coercive_class_check(params: CriticalParams, constraint: ConstraintClass) -> None:
    cfg: McConfig = McConfig(samples=4096, seed=2, chunk=512)
    report = coercive_class_probe(constraint, span_family(1, bumps=1), 20, params, cfg, suite=[coordinate(1)], B_values=(-1.0, 0.0, 1.0))

    assert report.get_quantity("C_0").value > 0.0
    assert report.get_quantity("optimizer_evaluations").value <= 20
    assert report.verdicts["holder_step"] is Verdict.PASS
    assert report.verdicts["projection_idempotent"] is Verdict.PASS
    assert report.verdicts["dichotomy"] is Verdict.PASS
    for B in (-1.0, 0.0, 1.0):
        assert report.verdicts[f"constructive[B={B:g}]"] is Verdict.PASS
