from collections.abc import Sequence
import logging
import math

import numpy as np

from ..enums import InequalityForm, Provenance, Side, Verdict
from ..estimators.mc_config import Estimate, McConfig
from ..estimators.residuals import InequalityTerms, inequality_terms
from ..functions.families import constant
from ..functions.test_function import TestFunction
from ..optimizer.nelder_mead import OptResult, maximize
from ..optimizer.param_family import ParamFamily
from ..report import ExperimentReport, residual_holds

from .critical_params import CriticalParams
from .scalar_lemmas import scalar_F_sup
from .thresholds import thresholds

logger: logging.Logger = logging.getLogger(__name__)

class Candidate:
    """A test function with its measured inequality terms."""
    def __init__(self, u: TestFunction, terms: InequalityTerms) -> None:
        self.u = u
        self.terms = terms

    def leading_constant(self, B: float, form: InequalityForm) -> Estimate | None:
        # Constants have a vanishing seminorm and drop out of the supremum.
        if self.u.is_constant or self.terms.seminorm_p.value <= 0:
            return None

        return self.terms.leading_constant(B, form)

def _candidate_pool(
    Bs: Sequence[float],
    form: InequalityForm,
    family: ParamFamily | None,
    budget: int,
    params: CriticalParams,
    cfg: McConfig,
    suite: Sequence[TestFunction],
    side: Side
    ) -> list[Candidate]:
    pool: list[Candidate] = [Candidate(u, inequality_terms(u, params.s, params.p, cfg, side)) for u in suite]
    if family is None:
        return pool

    for B in Bs:
        def objective(x: np.ndarray) -> float:
            u: TestFunction = family.build(x)
            estimate: Estimate | None = Candidate(u, inequality_terms(u, params.s, params.p, cfg, side)).leading_constant(B, form)
            return -math.inf if estimate is None else estimate.value

        result: OptResult = maximize(objective, family, budget, cfg.seed)
        best: TestFunction = family.build(result.best_params)
        pool.append(Candidate(best, inequality_terms(best, params.s, params.p, cfg, side)))

    return pool

def _sup_over_pool(pool: Sequence[Candidate], B: float, form: InequalityForm) -> tuple[float, float, str]:
    best_value: float = 0.0
    best_error: float = 0.0
    best_label: str = ""
    for candidate in pool:
        estimate: Estimate | None = candidate.leading_constant(B, form)
        if estimate is not None and estimate.value > best_value:
            best_value, best_error, best_label = estimate.value, estimate.std_error, candidate.u.label

    return best_value, best_error, best_label

def admissibility_scan(
    B_grid: Sequence[float],
    form: InequalityForm,
    family: ParamFamily | None,
    budget: int,
    params: CriticalParams,
    cfg: McConfig | None = None,
    suite: Sequence[TestFunction] = (),
    side: Side = Side.SPHERE
    ) -> ExperimentReport:
    """
    Empirical A_min(B) on a grid of B over one shared candidate pool.

    The pool holds the suite plus the optimizer's best function for every
    admissible grid value; below the threshold A_min is unbounded, witnessed
    by the constant 1.
    """
    cfg = cfg or McConfig()
    threshold: float = thresholds(params).threshold(form)
    Bs: list[float] = sorted(float(B) for B in B_grid)

    report: ExperimentReport = ExperimentReport("admissibility", {"B_grid": Bs, "form": form.value, "budget": budget, "side": side.value, **params.to_dict()})
    report.add_quantity("threshold", threshold, provenance=Provenance.QUADRATURE)
    report.columns = ["B", "A_min", "A_min_se", "witness", "verdict"]

    pool: list[Candidate] = _candidate_pool([B for B in Bs if B >= threshold], form, family, budget, params, cfg, suite, side)
    one: TestFunction = constant(1.0, params.n)
    witness: Candidate = Candidate(one, inequality_terms(one, params.s, params.p, cfg, side))

    previous: float = math.inf
    monotone: bool = True
    for B in Bs:
        if B < threshold:
            A_min, A_min_se, label = math.inf, 0.0, witness.u.label
            verdict: Verdict = Verdict.UNBOUNDED
            # The constant residual is negative for every A.
            if not witness.terms.residual(0.0, B, form).value < 0:
                report.notes.append(f"Constant witness residual is not negative at B={B!r}.")
        else:
            A_min, A_min_se, label = _sup_over_pool(pool, B, form)
            verdict = Verdict.BOUNDED

            residuals: list[Estimate] = [candidate.terms.residual(A_min, B, form) for candidate in pool]
            holds: bool = all(residual_holds(residual.value, residual.std_error) for residual in residuals)
            report.set_verdict(f"residuals[B={B:g}]", Verdict.PASS if holds else Verdict.FAIL)

        monotone = monotone and A_min <= previous
        previous = A_min
        report.set_verdict(f"admissibility[B={B:g}]", verdict)
        report.add_quantity(f"A_min[B={B:g}]", A_min, A_min_se, Provenance.MONTE_CARLO)
        report.add_row(B=B, A_min=A_min, A_min_se=A_min_se, witness=label, verdict=verdict.value)

    report.set_verdict("monotone", Verdict.PASS if monotone else Verdict.FAIL)
    logger.info(f"[admissibility_scan] - {form.value}: {len(Bs)} B values over {len(pool)} candidates, monotone={monotone}.")
    return report

def admissibility_probe(
    B: float,
    form: InequalityForm,
    family: ParamFamily | None,
    budget: int,
    params: CriticalParams,
    cfg: McConfig | None = None,
    suite: Sequence[TestFunction] = (),
    side: Side = Side.SPHERE
    ) -> ExperimentReport:
    report: ExperimentReport = admissibility_scan([B], form, family, budget, params, cfg, suite, side)
    report.name = "admissibility_probe"
    report.params["B"] = B
    return report

def endpoint_constant(C_M: float, params: CriticalParams, C_q: float | None = None) -> float:
    """
    Constructive A_1 for the power form at the threshold when 1 < p <= 2:
    ((q - 1) C_M^2)^(p/2) for q >= 2, and (C_q C_M^q)^(p/q) for q < 2.
    """
    if C_M < 0:
        raise ValueError(f"C_M must be nonnegative: {C_M}")
    if params.p > 2:
        raise ValueError(f"Endpoint constant needs p <= 2: {params.p}")

    q: float = params.q
    p: float = params.p
    if q >= 2:
        return ((q - 1.0) * C_M**2) ** (p / 2.0)

    C_q = scalar_F_sup(q) if C_q is None else C_q
    return (C_q * C_M**q) ** (p / q)
