from collections.abc import Sequence
import logging

import numpy as np

from ..enums import InequalityForm, Provenance, Side, Verdict
from ..estimators.chunks import STREAM_HEISENBERG, STREAM_SPHERE, chunk_rng
from ..estimators.mc_config import Estimate, McConfig, combined_error
from ..estimators.norms import integral, lp_norm
from ..estimators.residuals import InequalityTerms, inequality_terms
from ..estimators.seminorm import gagliardo
from ..functions.families import cap_bump, constant, coordinate, linear_combination, product, random_center
from ..functions.test_function import TestFunction
from ..geometry.cayley import forward_coords, inverse_coords, jacobian_integral_mc, pole_distance, pushforward
from ..geometry.sphere import uniform_coords, volume
from ..report import ExperimentReport, agreement, classify_slack

from .critical_params import CriticalParams

logger: logging.Logger = logging.getLogger(__name__)

ROUND_TRIP_POINTS: int = 10**4
ROUND_TRIP_TOLERANCE: float = 1e-12
# Sphere points closer than this to the south pole are left out of the round trip.
POLE_MARGIN: float = 1e-2

def round_trip_errors(n: int, count: int = ROUND_TRIP_POINTS, seed: int = 0) -> tuple[float, float]:
    """Largest componentwise errors of inverse(forward(zeta)) and forward(inverse(a))."""
    zeta: np.ndarray = uniform_coords(n, count, chunk_rng(seed, STREAM_SPHERE, 0))
    zeta = zeta[pole_distance(zeta) >= POLE_MARGIN]
    a: np.ndarray = chunk_rng(seed, STREAM_HEISENBERG, 0).standard_normal((count, 2 * n + 1))

    sphere_error: float = float(np.max(np.abs(inverse_coords(forward_coords(zeta)) - zeta)))
    heisenberg_error: float = float(np.max(np.abs(forward_coords(inverse_coords(a)) - a)))
    return sphere_error, heisenberg_error

def change_of_variables_suite(n: int, seed: int = 0) -> list[TestFunction]:
    """The constant 1, |w_1|^2 and a cap bump."""
    w1_squared: TestFunction = linear_combination(
        [(1.0, product(coordinate(1, n), coordinate(1, n))), (1.0, product(coordinate(n + 2, n), coordinate(n + 2, n)))],
        label="|w_1|^2"
        )
    return [constant(1.0, n), w1_squared, cap_bump(random_center(n, seed, 3000), 1.2, 1.0)]

def _agreement(sphere: Estimate, weighted: Estimate) -> Verdict:
    return agreement(sphere.value, weighted.value, combined_error(sphere.std_error, weighted.std_error))

def verify_cayley(
    params: CriticalParams,
    suite: Sequence[TestFunction],
    cfg: McConfig | None = None,
    exponents: Sequence[float] = (2.0,)
    ) -> ExperimentReport:
    """
    Cayley transport checks: round trips, the Jacobian integral against the
    volume, change of variables, and the L^r and seminorm isometries on ``suite``.
    """
    cfg = cfg or McConfig()
    n: int = params.n
    s: float = params.s
    p: float = params.p

    report: ExperimentReport = ExperimentReport("verify_cayley", {"functions": [u.label for u in suite], "exponents": list(exponents), **params.to_dict()})
    report.columns = ["function", "quantity", "sphere", "sphere_se", "weighted", "weighted_se", "verdict"]

    sphere_error, heisenberg_error = round_trip_errors(n, seed=cfg.seed)
    report.add_quantity("round_trip_sphere", sphere_error)
    report.add_quantity("round_trip_heisenberg", heisenberg_error)
    report.set_verdict("round_trip_sphere", Verdict.PASS if sphere_error <= ROUND_TRIP_TOLERANCE else Verdict.FAIL)
    report.set_verdict("round_trip_heisenberg", Verdict.PASS if heisenberg_error <= ROUND_TRIP_TOLERANCE else Verdict.FAIL)

    omega: float = volume(n).omega
    jacobian_mc: Estimate = jacobian_integral_mc(n, cfg)
    report.add_quantity("omega", omega, provenance=Provenance.QUADRATURE)
    report.add_estimate("jacobian_integral_mc", jacobian_mc)
    report.set_verdict("jacobian_integral", agreement(omega, jacobian_mc.value, jacobian_mc.std_error))

    def compare(u: TestFunction, quantity: str, sphere: Estimate, weighted: Estimate) -> None:
        verdict: Verdict = _agreement(sphere, weighted)
        report.set_verdict(f"{quantity}[{u.label}]", verdict)
        report.add_row(
            function=u.label,
            quantity=quantity,
            sphere=sphere.value,
            sphere_se=sphere.std_error,
            weighted=weighted.value,
            weighted_se=weighted.std_error,
            verdict=verdict.value
            )

    for f in change_of_variables_suite(n, cfg.seed):
        compare(f, "change_of_variables", integral(f, cfg), integral(pushforward(f), cfg, Side.WEIGHTED_HEISENBERG))

    for u in suite:
        U: TestFunction = pushforward(u)
        for r in exponents:
            compare(u, f"lr_isometry(r={r:g})", lp_norm(u, r, cfg), lp_norm(U, r, cfg, Side.WEIGHTED_HEISENBERG))
        compare(u, "seminorm_isometry", gagliardo(u, s, p, Side.SPHERE, cfg), gagliardo(U, s, p, Side.WEIGHTED_HEISENBERG, cfg))

    logger.info(f"[verify_cayley] - n={n}: round trips {sphere_error:.3g} / {heisenberg_error:.3g}, {report.overall.value}.")
    return report

def side_equivalence_check(
    params: CriticalParams,
    suite: Sequence[TestFunction],
    A: float,
    B_values: Sequence[float],
    form: InequalityForm = InequalityForm.LINEAR,
    cfg: McConfig | None = None
    ) -> ExperimentReport:
    """
    Residuals of one inequality measured on the sphere and again on the
    weighted H^n side. Verdicts fail only when one side is SATISFIED and the
    other VIOLATED; residual values must agree within the combined band.
    """
    cfg = cfg or McConfig()
    report: ExperimentReport = ExperimentReport("cayley_equivalence", {"A": A, "B_values": list(B_values), "form": form.value, **params.to_dict()})
    report.columns = ["function", "B", "sphere", "sphere_se", "weighted", "weighted_se", "sphere_verdict", "weighted_verdict"]

    for u in suite:
        sphere_terms: InequalityTerms = inequality_terms(u, params.s, params.p, cfg, Side.SPHERE)
        weighted_terms: InequalityTerms = inequality_terms(u, params.s, params.p, cfg, Side.WEIGHTED_HEISENBERG)

        for B in B_values:
            sphere: Estimate = sphere_terms.residual(A, B, form)
            weighted: Estimate = weighted_terms.residual(A, B, form)
            sphere_verdict: Verdict = classify_slack(sphere.value, sphere.std_error)
            weighted_verdict: Verdict = classify_slack(weighted.value, weighted.std_error)

            key: str = f"{u.label}, B={B:g}"
            contradiction: bool = {sphere_verdict, weighted_verdict} == {Verdict.SATISFIED, Verdict.VIOLATED}
            report.set_verdict(f"verdicts[{key}]", Verdict.FAIL if contradiction else Verdict.PASS)
            report.set_verdict(f"residuals[{key}]", _agreement(sphere, weighted))
            report.add_row(
                function=u.label,
                B=B,
                sphere=sphere.value,
                sphere_se=sphere.std_error,
                weighted=weighted.value,
                weighted_se=weighted.std_error,
                sphere_verdict=sphere_verdict.value,
                weighted_verdict=weighted_verdict.value
                )

    logger.info(f"[side_equivalence_check] - {form.value}, A={A!r}: {len(suite)} functions, {report.overall.value}.")
    return report
