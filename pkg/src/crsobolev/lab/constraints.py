from collections.abc import Sequence
import logging

import numpy as np

from ..enums import ConstraintClass, InequalityForm, Provenance, Side, Verdict
from ..estimators.chunks import STREAM_PROJECTION, STREAM_SPHERE, Chunk, ChunkPlan, batch_means, chunk_rng, map_chunks
from ..estimators.mc_config import Estimate, McConfig, combined_error
from ..estimators.residuals import InequalityTerms, inequality_terms
from ..functions.families import cap_bump, constant, linear_combination, random_center
from ..functions.test_function import TestFunction
from ..geometry.sphere import uniform_coords, volume
from ..optimizer.nelder_mead import OptResult, maximize
from ..optimizer.param_family import ParamFamily
from ..report import SIGMA_BAND, ExperimentReport, agreement

from .critical_params import CriticalParams

logger: logging.Logger = logging.getLogger(__name__)

# Moments within this many standard errors of 0 count as vanishing.
MOMENT_BAND: float = 4.0
MOMENT_ATOL: float = 1e-12
NEAR_CONSTANT_AMPLITUDES: tuple[float, ...] = (1e-1, 1e-2, 1e-3)
DICHOTOMY_FACTOR: float = 10.0

def moment_class_check(u: TestFunction, params: CriticalParams, cfg: McConfig | None = None, expected: bool | None = None) -> ExperimentReport:
    """
    First moments of |u|^(p*) against each real coordinate.

    Samples come in antipodal pairs (xi, -xi), so every moment of a function
    that is even under xi -> -xi vanishes exactly.
    """
    cfg = cfg or McConfig()
    n: int = u.n
    q: float = params.q
    omega: float = volume(n).omega
    plan: ChunkPlan = cfg.plan()

    def run_chunk(chunk: Chunk) -> np.ndarray:
        xi: np.ndarray = uniform_coords(n, chunk.length, chunk_rng(cfg.seed, STREAM_SPHERE, chunk.index))
        weight_plus: np.ndarray = np.abs(u(xi)) ** q
        weight_minus: np.ndarray = np.abs(u(-xi)) ** q
        return omega * np.mean(xi * (weight_plus - weight_minus)[:, None] / 2.0, axis=0)

    chunk_moments: np.ndarray = np.stack(map_chunks(run_chunk, plan, cfg.threads))
    report: ExperimentReport = ExperimentReport("moment_class", {"function": u.label, **params.to_dict()})

    in_class: bool = True
    for index in range(2 * n + 2):
        value, std_error = batch_means(chunk_moments[:, index], plan.sizes)
        vanishes: bool = abs(value) <= MOMENT_BAND * std_error + MOMENT_ATOL
        in_class = in_class and vanishes
        report.add_quantity(f"moment_{index + 1}", value, std_error, Provenance.MONTE_CARLO)
        report.flags[f"moment_{index + 1}_vanishes"] = vanishes

    report.flags["in_class"] = in_class
    if expected is not None:
        report.set_verdict("membership", Verdict.PASS if in_class == expected else Verdict.FAIL)

    logger.info(f"[moment_class_check] - {u.label}: {'in' if in_class else 'outside'} the first-moment class.")
    return report

def project(u: TestFunction, constraint: ConstraintClass, cfg: McConfig | None = None, force: bool = False) -> TestFunction:
    """
    Project onto the zero-average class, or onto the class orthogonal to
    span{1, xi_1, ..., xi_(2n+2)}. Functions already carrying the constraint
    are returned unchanged unless ``force`` is set.
    """
    if not force and (u.constraint is constraint or u.constraint is ConstraintClass.ORTHOGONAL_TO_Y):
        return u

    cfg = cfg or McConfig()
    n: int = u.n
    dim: int = 2 * n + 2
    plan: ChunkPlan = cfg.plan()

    def run_chunk(chunk: Chunk) -> tuple[np.ndarray, np.ndarray]:
        xi: np.ndarray = uniform_coords(n, chunk.length, chunk_rng(cfg.seed, STREAM_PROJECTION, chunk.index))
        design: np.ndarray = np.concatenate([np.ones((chunk.length, 1)), xi], axis=1)
        return design.T @ u(xi) / chunk.length, design.T @ design / chunk.length

    if u.is_constant:
        average: float = u.constant_value
        coefficients: np.ndarray = np.zeros(dim)
    else:
        results: list[tuple[np.ndarray, np.ndarray]] = map_chunks(run_chunk, plan, cfg.threads)
        weights: np.ndarray = plan.sizes / plan.sizes.sum()
        moments: np.ndarray = np.tensordot(weights, np.stack([result[0] for result in results]), axes=1)
        if constraint is ConstraintClass.ORTHOGONAL_TO_Y:
            # Least squares against the empirical Gram matrix: a second projection sees zero moments.
            gram: np.ndarray = np.tensordot(weights, np.stack([result[1] for result in results]), axes=1)
            solution: np.ndarray = np.linalg.solve(gram, moments)
            average, coefficients = float(solution[0]), solution[1:]
        else:
            average, coefficients = float(moments[0]), np.zeros(dim)

    def evaluator(coords: np.ndarray) -> np.ndarray:
        return u.evaluator(coords) - average - coords @ coefficients

    correction: float = float(np.sum(np.abs(coefficients)))
    return TestFunction(
        evaluator=evaluator,
        n=n,
        label=f"proj[{constraint.value}]({u.label})",
        domain=u.domain,
        is_constant=u.is_constant,
        is_mean_zero=True,
        lipschitz_bound=None if u.lipschitz_bound is None else u.lipschitz_bound + correction,
        sup_bound=None if u.sup_bound is None else u.sup_bound + abs(average) + correction,
        smoothness=u.smoothness,
        constraint=constraint
        )

def _ratio_or_none(terms: InequalityTerms) -> Estimate | None:
    if terms.seminorm.value <= 0:
        return None

    return terms.sobolev_ratio

def near_constant_family(n: int, seed: int, amplitudes: Sequence[float] = NEAR_CONSTANT_AMPLITUDES) -> list[TestFunction]:
    """1 + a * bump for shrinking a; the Sobolev ratio grows like 1/a."""
    bump: TestFunction = cap_bump(random_center(n, seed, 2000), 1.2, 1.0)
    return [linear_combination([(1.0, constant(1.0, n)), (amplitude, bump)], label=f"1+{amplitude:g}*bump") for amplitude in amplitudes]

def coercive_class_probe(
    constraint: ConstraintClass,
    family: ParamFamily,
    budget: int,
    params: CriticalParams,
    cfg: McConfig | None = None,
    suite: Sequence[TestFunction] = (),
    B_values: Sequence[float] = (-1.0, 0.0, 1.0),
    side: Side = Side.SPHERE
    ) -> ExperimentReport:
    """
    Empirical C_0 = sup ||u||_{p*} / [u] over the projected family and suite,
    the Hölder step ||u||_p <= omega^(1/p - 1/p*) ||u||_{p*} on the class,
    constructive leading constants for several B, and the dichotomy against
    unprojected near-constants.
    """
    cfg = cfg or McConfig()
    n: int = params.n
    p: float = params.p
    omega: float = volume(n).omega
    holder: float = omega ** (1.0 / p - 1.0 / params.q)

    report: ExperimentReport = ExperimentReport("coercive_class", {"constraint": constraint.value, "family": family.label, "budget": budget, "side": side.value, **params.to_dict()})
    report.columns = ["function", "ratio", "ratio_se", "lp_ratio", "projected"]

    def objective(x: np.ndarray) -> float:
        terms: InequalityTerms = inequality_terms(project(family.build(x), constraint, cfg), params.s, p, cfg, side)
        ratio: Estimate | None = _ratio_or_none(terms)
        return -np.inf if ratio is None else ratio.value

    result: OptResult = maximize(objective, family, budget, cfg.seed)
    probed: list[TestFunction] = [project(family.build(result.best_params), constraint, cfg)]
    probed.extend(project(u, constraint, cfg) for u in suite)

    C_0: float = 0.0
    C_0_se: float = 0.0
    C_X: float = 0.0
    holder_holds: bool = True
    class_terms: list[InequalityTerms] = []
    for u in probed:
        terms: InequalityTerms = inequality_terms(u, params.s, p, cfg, side)
        ratio: Estimate | None = _ratio_or_none(terms)
        if ratio is None:
            continue

        class_terms.append(terms)
        lp_ratio: float = terms.lp.value / terms.seminorm.value
        if ratio.value > C_0:
            C_0, C_0_se = ratio.value, ratio.std_error
        C_X = max(C_X, lp_ratio)
        # Hölder on the sampling measure holds for the shared sample exactly.
        holder_holds = holder_holds and terms.lp.value <= holder * terms.critical.value * (1.0 + 1e-12)
        report.add_row(function=u.label, ratio=ratio.value, ratio_se=ratio.std_error, lp_ratio=lp_ratio, projected=True)

    once: Estimate | None = _ratio_or_none(inequality_terms(probed[0], params.s, p, cfg, side))
    twice: Estimate | None = _ratio_or_none(inequality_terms(project(probed[0], constraint, cfg, force=True), params.s, p, cfg, side))
    if once is None or twice is None:
        idempotent: Verdict = Verdict.PASS if once is twice else Verdict.FAIL
    else:
        idempotent = agreement(once.value, twice.value, combined_error(once.std_error, twice.std_error))

    unprojected_max: float = 0.0
    for u in near_constant_family(n, cfg.seed):
        ratio = _ratio_or_none(inequality_terms(u, params.s, p, cfg, side))
        if ratio is None:
            continue

        unprojected_max = max(unprojected_max, ratio.value)
        report.add_row(function=u.label, ratio=ratio.value, ratio_se=ratio.std_error, lp_ratio=float("nan"), projected=False)

    report.add_quantity("C_0", C_0, C_0_se, Provenance.MONTE_CARLO)
    report.add_quantity("C_X", C_X, provenance=Provenance.MONTE_CARLO)
    report.add_quantity("C_X_holder", holder * C_0, provenance=Provenance.MONTE_CARLO)
    report.add_quantity("optimizer_best", result.best_value, provenance=Provenance.MONTE_CARLO)
    report.add_quantity("optimizer_evaluations", result.evaluations)
    report.add_quantity("unprojected_max_ratio", unprojected_max, provenance=Provenance.MONTE_CARLO)

    report.set_verdict("dichotomy", Verdict.PASS if unprojected_max > DICHOTOMY_FACTOR * C_0 else Verdict.FAIL)
    report.set_verdict("holder_step", Verdict.PASS if holder_holds else Verdict.FAIL)
    report.set_verdict("projection_idempotent", idempotent)

    # Constructive leading constants for any real B on the class.
    for B in B_values:
        negative_part: float = max(-B, 0.0)
        A_linear: float = C_0 + negative_part * C_X
        A_power: float = C_0**p + negative_part * C_X**p
        report.add_quantity(f"A_linear[B={B:g}]", A_linear, provenance=Provenance.MONTE_CARLO)
        report.add_quantity(f"A_power[B={B:g}]", A_power, provenance=Provenance.MONTE_CARLO)

        holds: bool = True
        for terms in class_terms:
            linear: Estimate = terms.residual(A_linear, B, InequalityForm.LINEAR)
            power: Estimate = terms.residual(A_power, B, InequalityForm.POWER)
            holds = holds and linear.value >= -SIGMA_BAND * linear.std_error and power.value >= -SIGMA_BAND * power.std_error
        report.set_verdict(f"constructive[B={B:g}]", Verdict.PASS if holds else Verdict.FAIL)

    logger.info(f"[coercive_class_probe] - {constraint.value}: C_0={C_0:.6g}, unprojected max {unprojected_max:.6g}.")
    return report
