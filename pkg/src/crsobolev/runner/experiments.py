"""
One function per lab subcommand.

Each takes the validated run configuration and returns the experiment report
together with the curves worth plotting from its rows.
"""
import logging
from typing import NamedTuple

import numpy as np

from ..enums import ConstraintClass, Experiment, InequalityForm, Provenance, Side, Verdict
from ..estimators.chunks import STREAM_SPHERE, chunk_rng
from ..estimators.mc_config import Estimate, McConfig, combined_error
from ..estimators.norms import lp_norm
from ..estimators.seminorm import coordinate_seminorm_exact, coordinate_seminorm_quadrature, gagliardo
from ..exceptions import UnknownExperimentError
from ..functions.families import antipodal_bump_pair, cap_bump, constant, coordinate, heisenberg_suite, random_center, standard_suite
from ..functions.harmonics import HarmonicIndex, dim_harmonic, dim_harmonic_bruteforce
from ..geometry.cayley import jacobian_integral_mc
from ..geometry.heisenberg import ball_volume, ball_volume_exact, ball_volume_grid, ball_volume_mc
from ..geometry.heisenberg_point import HeisenbergPoint
from ..geometry.local_poincare import PoincareSides, local_poincare_check, local_poincare_grid, poincare_constant
from ..geometry.sphere import apply_unitary, cr_distance, omega_exact, quasi_triangle_constant, random_unitary, uniform_coords, volume
from ..geometry.sphere_point import SpherePoint
from ..lab.admissibility import admissibility_scan
from ..lab.constraints import coercive_class_probe, moment_class_check
from ..lab.cutoff import cutoff_estimate_check
from ..lab.endpoint import perturbation_scan
from ..lab.equivalence import side_equivalence_check, verify_cayley
from ..lab.poincare import poincare_constants
from ..lab.scalar_lemmas import scalar_suite, young_split_report
from ..lab.subcritical import subcritical_check
from ..lab.thresholds import certificate_flips, threshold_identity_error, thresholds
from ..optimizer.param_family import span_family
from ..report import ExperimentReport, agreement, residual_holds

from .plots import CurveSpec
from .run_config import RunConfig

logger: logging.Logger = logging.getLogger(__name__)

OMEGA_TOLERANCE: float = 1e-6
BALL_TOLERANCE: float = 1e-8
GRID_TOLERANCE: float = 0.01
IDENTITY_TOLERANCE: float = 1e-12
ORACLE_TOLERANCE: float = 0.05
EXACTNESS_TOLERANCE: float = 1e-8

class ExperimentResult(NamedTuple):
    report: ExperimentReport
    curves: list[CurveSpec]

def _passes(passed: bool) -> Verdict:
    return Verdict.PASS if passed else Verdict.FAIL

def _relative_error(value: float, target: float) -> float:
    return abs(value - target) / abs(target) if target != 0 else abs(value)

def run_volume(config: RunConfig) -> ExperimentResult:
    n: int = config.params.n
    cfg: McConfig = config.mc
    report: ExperimentReport = ExperimentReport("volume", {"n": n, "radii": config.options["radii"]})

    measure = volume(n)
    exact: float = omega_exact(n)
    jacobian_mc: Estimate = jacobian_integral_mc(n, cfg)
    report.add_quantity("omega", measure.omega, provenance=Provenance.QUADRATURE)
    report.add_quantity("omega_exact", exact)
    report.add_quantity("round_area", measure.round_area)
    report.add_quantity("density_ratio", measure.density_ratio, provenance=Provenance.QUADRATURE)
    report.add_estimate("omega_mc", jacobian_mc)
    report.set_verdict("omega_closed_form", _passes(_relative_error(measure.omega, exact) <= OMEGA_TOLERANCE))
    report.set_verdict("omega_mc", agreement(measure.omega, jacobian_mc.value, jacobian_mc.std_error))

    unit_ball: float = ball_volume(n)
    report.add_quantity("ball_volume", unit_ball, provenance=Provenance.QUADRATURE)
    report.add_quantity("ball_volume_exact", ball_volume_exact(n))
    report.set_verdict("ball_closed_form", _passes(_relative_error(unit_ball, ball_volume_exact(n)) <= BALL_TOLERANCE))
    if n == 1:
        grid: float = ball_volume_grid(n)
        report.add_quantity("ball_volume_grid", grid, provenance=Provenance.QUADRATURE)
        report.set_verdict("ball_grid", _passes(_relative_error(grid, unit_ball) <= GRID_TOLERANCE))

    report.columns = ["r", "ratio", "ratio_se"]
    Q: int = 2 * n + 2
    for r in config.options["radii"]:
        ratio: Estimate = ball_volume_mc(float(r), n, cfg).scaled(float(r) ** -Q)
        report.add_row(r=float(r), ratio=ratio.value, ratio_se=ratio.std_error)
        report.set_verdict(f"ball_scaling[r={float(r):g}]", agreement(ratio.value, unit_ball, ratio.std_error))

    rng: np.random.Generator = chunk_rng(cfg.seed, STREAM_SPHERE, 0)
    a: SpherePoint = SpherePoint(uniform_coords(n, 1000, rng), normalize=False)
    b: SpherePoint = SpherePoint(uniform_coords(n, 1000, rng), normalize=False)
    unitary: np.ndarray = random_unitary(n, rng)
    invariance: float = float(np.max(np.abs(cr_distance(apply_unitary(unitary, a), apply_unitary(unitary, b)) - cr_distance(a, b))))
    report.add_quantity("unitary_invariance_error", invariance)
    report.set_verdict("unitary_invariance", _passes(invariance <= IDENTITY_TOLERANCE))
    report.add_quantity("quasi_triangle_constant", quasi_triangle_constant(n, int(config.options["triangle_triples"]), cfg.seed), provenance=Provenance.MONTE_CARLO)

    for j in range(5):
        for k in range(5):
            index: HarmonicIndex = HarmonicIndex(j, k)
            if dim_harmonic(index, n) != dim_harmonic_bruteforce(index, n):
                report.set_verdict(f"dim_harmonic[{j},{k}]", Verdict.FAIL)
    report.set_verdict("degree_one_count", _passes(dim_harmonic(HarmonicIndex(1, 0), n) + dim_harmonic(HarmonicIndex(0, 1), n) == Q))

    return ExperimentResult(report, [CurveSpec("ball_scaling", "r", ("ratio",), "r", "|B_r| / r^Q", log_x=True)])

def run_verify_cayley(config: RunConfig) -> ExperimentResult:
    params = config.params
    options = config.options
    suite = standard_suite(params.n, config.mc.seed)
    exponents: list[float] = [float(r) for r in options["exponents"]]
    report: ExperimentReport = verify_cayley(params, suite, config.mc, exponents)

    threshold: float = thresholds(params).linear_threshold
    B_values: list[float] = [float(factor) * threshold for factor in options["B_factors"]]
    report.merge(side_equivalence_check(params, suite, float(options["A"]), B_values, InequalityForm.LINEAR, config.mc), "equivalence")
    return ExperimentResult(report, [])

def run_seminorm(config: RunConfig) -> ExperimentResult:
    """Estimator soundness: isometry, homogeneity, translation, importance weights, cutoff and the p = 2 oracle."""
    params = config.params
    n: int = params.n
    s: float = params.s
    p: float = params.p
    cfg: McConfig = config.mc
    options = config.options
    suite = standard_suite(n, cfg.seed)

    report: ExperimentReport = ExperimentReport("seminorm", {"functions": [u.label for u in suite], **params.to_dict(), "options": options})
    report.columns = ["function", "sphere", "sphere_se", "weighted", "weighted_se", "uniform_pairs", "uniform_pairs_se"]

    Q: int = 2 * n + 2
    spread_beta: float = min(Q - 1 + p * (1.0 - s) / 2.0, (2.0 * Q - 1.0) / 2.0)
    uniform_cfg: McConfig = cfg.replace(importance_exponent=0.0)
    spread_cfg: McConfig = cfg.replace(importance_exponent=spread_beta)
    cutoff_cfg: McConfig = cfg.replace(diagonal_cutoff=float(options["cutoff"]))

    for u in suite:
        sphere: Estimate = gagliardo(u, s, p, Side.SPHERE, cfg)
        weighted: Estimate = gagliardo(u, s, p, Side.WEIGHTED_HEISENBERG, cfg)
        uniform_pairs: Estimate = gagliardo(u, s, p, Side.SPHERE, uniform_cfg)
        spread_pairs: Estimate = gagliardo(u, s, p, Side.SPHERE, spread_cfg)
        report.add_row(
            function=u.label,
            sphere=sphere.value,
            sphere_se=sphere.std_error,
            weighted=weighted.value,
            weighted_se=weighted.std_error,
            uniform_pairs=uniform_pairs.value,
            uniform_pairs_se=uniform_pairs.std_error
            )
        report.set_verdict(f"isometry[{u.label}]", agreement(sphere.value, weighted.value, combined_error(sphere.std_error, weighted.std_error)))
        report.set_verdict(f"importance[{u.label}]", agreement(uniform_pairs.value, spread_pairs.value, combined_error(uniform_pairs.std_error, spread_pairs.std_error)))

        if u.is_constant:
            report.set_verdict(f"constant_zero[{u.label}]", _passes(sphere.value == 0 and sphere.std_error == 0))
        if u.lipschitz_bound is not None:
            cut: Estimate = gagliardo(u, s, p, Side.SPHERE, cutoff_cfg)
            report.set_verdict(f"cutoff_sound[{u.label}]", _passes(residual_holds(cut.upper - sphere.value, combined_error(cut.std_error, sphere.std_error))))

    probe = coordinate(1, n)
    factor: float = float(options["homogeneity_factor"])
    shift: float = float(options["shift"])
    base: Estimate = gagliardo(probe, s, p, cfg=cfg)
    scaled: Estimate = gagliardo(probe.scaled(factor), s, p, cfg=cfg)
    shifted: Estimate = gagliardo(probe.shifted(shift), s, p, cfg=cfg)
    norm: Estimate = lp_norm(probe, p, cfg)
    scaled_norm: Estimate = lp_norm(probe.scaled(factor), p, cfg)
    report.set_verdict("homogeneity_seminorm", _passes(_relative_error(scaled.value, factor**p * base.value) <= EXACTNESS_TOLERANCE))
    report.set_verdict("homogeneity_norm", _passes(_relative_error(scaled_norm.value, factor * norm.value) <= EXACTNESS_TOLERANCE))
    report.set_verdict("translation", _passes(_relative_error(shifted.value, base.value) <= EXACTNESS_TOLERANCE))

    # The closed form and its quadrature are for p = 2.
    exact: float = coordinate_seminorm_exact(n, s)
    quadrature: float = coordinate_seminorm_quadrature(n, s)
    mc: Estimate = gagliardo(probe, s, 2.0, cfg=cfg)
    report.add_quantity("coordinate_exact", exact)
    report.add_quantity("coordinate_quadrature", quadrature, provenance=Provenance.QUADRATURE)
    report.add_estimate("coordinate_mc", mc)
    report.set_verdict("coordinate_quadrature", _passes(_relative_error(quadrature, exact) <= EXACTNESS_TOLERANCE))
    report.set_verdict("coordinate_oracle", _passes(_relative_error(mc.value, exact) <= ORACLE_TOLERANCE))

    bump = cap_bump(random_center(n, cfg.seed, 4000), 1.2, 1.0)
    report.merge(cutoff_estimate_check(bump, probe, params, cfg), "cutoff_estimate")
    return ExperimentResult(report, [])

def run_thresholds(config: RunConfig) -> ExperimentResult:
    params = config.params
    threshold_report = thresholds(params)
    report: ExperimentReport = ExperimentReport("thresholds", params.to_dict())
    report.add_quantity("omega", threshold_report.omega, provenance=Provenance.QUADRATURE)
    report.add_quantity("linear_threshold", threshold_report.linear_threshold, provenance=Provenance.QUADRATURE)
    report.add_quantity("power_threshold", threshold_report.power_threshold, provenance=Provenance.QUADRATURE)

    identity_error: float = threshold_identity_error(threshold_report)
    report.add_quantity("identity_error", identity_error)
    report.set_verdict("identity", _passes(identity_error <= IDENTITY_TOLERANCE))

    report.columns = ["form", "position", "verdict"]
    expected: dict[str, Verdict] = {"below": Verdict.VIOLATED, "at": Verdict.BOUNDARY, "above": Verdict.SATISFIED}
    for form in InequalityForm:
        flips: dict[str, Verdict] = certificate_flips(params, form, float(config.options["offset"]))
        for position, verdict in flips.items():
            report.add_row(form=form.value, position=position, verdict=verdict.value)
        report.set_verdict(f"flips[{form.value}]", _passes(flips == expected))

    return ExperimentResult(report, [])

def run_scan_endpoint(config: RunConfig) -> ExperimentResult:
    n: int = config.params.n
    phi = coordinate(1, n)
    # The square of one real coordinate integrates to omega / (2n + 2).
    m2_exact: float = volume(n).omega / (2 * n + 2)
    report: ExperimentReport = perturbation_scan(phi, config.params, [float(eps) for eps in config.options["eps_list"]], config.mc, m2_exact)
    return ExperimentResult(report, [CurveSpec("second_differences", "eps", ("D_N", "D_P"), "eps", "D(eps)", log_x=True)])

def run_scalar_lemmas(config: RunConfig) -> ExperimentResult:
    params = config.params
    trials: int = int(config.options["trials"])
    seed: int = int(config.options["scalar_seed"])
    report: ExperimentReport = scalar_suite(params, trials, seed)
    report.merge(young_split_report(1.2 * thresholds(params).power_threshold, 1.0, params), "young_constants")
    return ExperimentResult(report, [])

def run_poincare(config: RunConfig) -> ExperimentResult:
    params = config.params
    cfg: McConfig = config.mc
    report: ExperimentReport = poincare_constants(params, standard_suite(params.n, cfg.seed), cfg)

    local_cfg: McConfig = cfg.replace(samples=min(cfg.samples, int(config.options["local_samples"])))
    radius: float = float(config.options["radius"])
    center: HeisenbergPoint = HeisenbergPoint.identity(params.n)
    for U in heisenberg_suite(params.n):
        report.merge(local_poincare_check(U, radius, center, params.s, params.p, local_cfg), f"local[{U.label}]")

    if params.n == 1:
        # Same inequality on the deterministic midpoint grid of the ball.
        grid_constant: float = poincare_constant(params.n, params.s, params.p)
        for U in heisenberg_suite(params.n):
            sides: PoincareSides = local_poincare_grid(U, radius, center, params.s, params.p)
            slack: float = grid_constant * radius ** (params.s * params.p) * sides.double_integral - sides.deviation
            report.add_quantity(f"local_grid[{U.label}].slack", slack, provenance=Provenance.QUADRATURE)
            report.set_verdict(f"local_grid[{U.label}]", _passes(slack >= 0))

    return ExperimentResult(report, [])

def run_admissibility(config: RunConfig) -> ExperimentResult:
    params = config.params
    cfg: McConfig = config.mc
    options = config.options
    form: InequalityForm = InequalityForm(options["form"])
    threshold: float = thresholds(params).threshold(form)

    B_grid: list[float] = [float(B) for B in options["B_grid"]] if options["B_grid"] else [factor * threshold for factor in (0.9, 1.0, 1.1, 1.5, 2.0)]
    family = span_family(params.n, int(options["bumps"]), seed=cfg.seed)
    report: ExperimentReport = admissibility_scan(B_grid, form, family, int(options["budget"]), params, cfg, standard_suite(params.n, cfg.seed))
    return ExperimentResult(report, [CurveSpec("a_min", "B", ("A_min",), "B", "A_min(B)")])

def run_subcritical(config: RunConfig) -> ExperimentResult:
    params = config.params
    cfg: McConfig = config.mc
    options = config.options
    suite = standard_suite(params.n, cfg.seed)

    r: float = float(options["r"]) if options["r"] is not None else (params.p + params.p_star) / 2.0
    A0: float | None = options["A0"]
    if A0 is None:
        # Leading constant at the linear threshold over the suite.
        T: float = thresholds(params).linear_threshold
        A0 = admissibility_scan([T], InequalityForm.LINEAR, None, 1, params, cfg, suite).get_quantity(f"A_min[B={T:g}]").value

    report: ExperimentReport = subcritical_check(r, float(options["eps"]), float(A0), params, suite, cfg, InequalityForm(options["form"]), Side(options["side"]))
    report.add_quantity("A0", float(A0), provenance=Provenance.MONTE_CARLO)
    return ExperimentResult(report, [])

def run_constraints(config: RunConfig) -> ExperimentResult:
    params = config.params
    cfg: McConfig = config.mc
    options = config.options
    n: int = params.n

    family = span_family(n, int(options["bumps"]), seed=cfg.seed)
    report: ExperimentReport = coercive_class_probe(
        ConstraintClass(options["constraint"]),
        family,
        int(options["budget"]),
        params,
        cfg,
        standard_suite(n, cfg.seed),
        [float(B) for B in options["B_values"]]
        )

    center = random_center(n, cfg.seed, 5000)
    for label, u, expected in (
        ("constant", constant(1.0, n), True),
        ("antipodal_pair", antipodal_bump_pair(center, 0.8, 1.0), True),
        ("single_bump", cap_bump(center, 0.8, 1.0), False)
        ):
        report.merge(moment_class_check(u, params, cfg, expected), f"moments[{label}]")

    return ExperimentResult(report, [])

def run_experiment(config: RunConfig) -> ExperimentResult:
    logger.info(f"[{config.experiment.value}] - Running with n={config.params.n}, s={config.params.s}, p={config.params.p}, samples={config.mc.samples}.")
    match config.experiment:
        case Experiment.VOLUME:
            result: ExperimentResult = run_volume(config)
        case Experiment.VERIFY_CAYLEY:
            result = run_verify_cayley(config)
        case Experiment.SEMINORM:
            result = run_seminorm(config)
        case Experiment.THRESHOLDS:
            result = run_thresholds(config)
        case Experiment.SCAN_ENDPOINT:
            result = run_scan_endpoint(config)
        case Experiment.SCALAR_LEMMAS:
            result = run_scalar_lemmas(config)
        case Experiment.POINCARE:
            result = run_poincare(config)
        case Experiment.ADMISSIBILITY:
            result = run_admissibility(config)
        case Experiment.SUBCRITICAL:
            result = run_subcritical(config)
        case Experiment.CONSTRAINTS:
            result = run_constraints(config)
        case _:
            raise UnknownExperimentError(config.experiment.value, [member.value for member in Experiment if member is not Experiment.REPORT])

    failures: list[str] = [key for key, verdict in result.report.verdicts.items() if verdict.is_failure]
    logger.info(f"[{config.experiment.value}] - {len(result.report.verdicts)} verdicts, {len(failures)} failing: {failures}.")
    return result
