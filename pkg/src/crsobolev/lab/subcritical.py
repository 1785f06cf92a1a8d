from collections.abc import Sequence
import logging

from ..enums import InequalityForm, Provenance, Side, Verdict
from ..estimators.mc_config import Estimate, McConfig, combined_error
from ..estimators.norms import lp_norm
from ..estimators.seminorm import gagliardo
from ..functions.test_function import TestFunction
from ..report import SIGMA_BAND, ExperimentReport

from .critical_params import CriticalParams
from .thresholds import thresholds

logger: logging.Logger = logging.getLogger(__name__)

def interpolation_exponent(r: float, params: CriticalParams) -> float:
    """theta with 1/r = theta/p* + (1 - theta)/p."""
    if not params.p <= r < params.p_star:
        raise ValueError(f"Exponent r must lie in [p, p*) = [{params.p}, {params.p_star}): {r}")

    return (1.0 / params.p - 1.0 / r) / (1.0 / params.p - 1.0 / params.p_star)

def _linear_constant(theta: float, eps: float, A0: float, params: CriticalParams) -> float:
    # omega^(-theta s/Q) is the linear threshold raised to theta.
    lower_order: float = thresholds(params).linear_threshold ** theta
    if theta == 0 or A0 == 0:
        return lower_order

    delta: float = eps / (theta * A0)
    return (1.0 - theta) * delta ** (-theta / (1.0 - theta)) + lower_order

def subcritical_constants(
    r: float,
    eps: float,
    A0: float,
    params: CriticalParams,
    form: InequalityForm = InequalityForm.LINEAR
    ) -> tuple[float, float]:
    """
    theta and the lower-order constant of ||u||_r <= eps [u] + C ||u||_p
    (linear form) or of ||u||_r^p <= eps [u]^p + C ||u||_p^p (power form),
    assembled from the leading constant A0 at the linear threshold.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive: {eps}")
    if A0 < 0:
        raise ValueError(f"A0 must be nonnegative: {A0}")

    theta: float = interpolation_exponent(r, params)
    match form:
        case InequalityForm.LINEAR:
            constant: float = _linear_constant(theta, eps, A0, params)
        case InequalityForm.POWER:
            eps_linear: float = (eps / 2.0 ** (params.p - 1.0)) ** (1.0 / params.p)
            constant = 2.0 ** (params.p - 1.0) * _linear_constant(theta, eps_linear, A0, params) ** params.p
        case _:
            raise ValueError(f"Unknown inequality form: {form}")

    return theta, constant

def subcritical_check(
    r: float,
    eps: float,
    A0: float,
    params: CriticalParams,
    family: Sequence[TestFunction],
    cfg: McConfig | None = None,
    form: InequalityForm = InequalityForm.LINEAR,
    side: Side = Side.SPHERE
    ) -> ExperimentReport:
    """Residual eps [u] + C ||u||_p - ||u||_r (or its power form) on every function of ``family``."""
    cfg = cfg or McConfig()
    theta, constant = subcritical_constants(r, eps, A0, params, form)
    p: float = params.p

    report: ExperimentReport = ExperimentReport("subcritical", {"r": r, "eps": eps, "A0": A0, "form": form.value, "side": side.value, **params.to_dict()})
    report.add_quantity("theta", theta)
    report.add_quantity("constant", constant, provenance=Provenance.QUADRATURE)
    report.columns = ["function", "seminorm", "lp", "lr", "residual", "residual_se", "verdict"]

    for u in family:
        seminorm_p: Estimate = gagliardo(u, params.s, p, side, cfg)
        lp: Estimate = lp_norm(u, p, cfg, side)
        lr: Estimate = lp_norm(u, r, cfg, side)

        match form:
            case InequalityForm.LINEAR:
                seminorm: Estimate = seminorm_p.power(1.0 / p)
                value: float = eps * seminorm.value + constant * lp.value - lr.value
                error: float = combined_error(eps * seminorm.std_error, constant * lp.std_error, lr.std_error)
            case _:
                lp_p: Estimate = lp.power(p)
                lr_p: Estimate = lr.power(p)
                seminorm = seminorm_p
                value = eps * seminorm_p.value + constant * lp_p.value - lr_p.value
                error = combined_error(eps * seminorm_p.std_error, constant * lp_p.std_error, lr_p.std_error)

        verdict: Verdict = Verdict.PASS if value >= -SIGMA_BAND * error else Verdict.FAIL
        report.set_verdict(f"residual[{u.label}]", verdict)
        report.add_row(function=u.label, seminorm=seminorm.value, lp=lp.value, lr=lr.value, residual=value, residual_se=error, verdict=verdict.value)

    logger.info(f"[subcritical_check] - r={r!r}, eps={eps!r}, {form.value}, {side.value}: theta={theta:.6g}, C={constant:.6g}, {report.overall.value}.")
    return report
