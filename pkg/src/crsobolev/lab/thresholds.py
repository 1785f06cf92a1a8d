import logging
from typing import NamedTuple

from ..enums import InequalityForm, Provenance, Verdict
from ..estimators.mc_config import McConfig
from ..geometry.sphere import volume
from ..report import ExperimentReport

from .critical_params import CriticalParams

logger: logging.Logger = logging.getLogger(__name__)

class ThresholdReport(NamedTuple):
    linear_threshold: float
    power_threshold: float
    omega: float
    params: CriticalParams

    def threshold(self, form: InequalityForm) -> float:
        match form:
            case InequalityForm.LINEAR:
                return self.linear_threshold
            case InequalityForm.POWER:
                return self.power_threshold
            case _:
                raise ValueError(f"Unknown inequality form: {form}")

def thresholds(params: CriticalParams) -> ThresholdReport:
    """Left endpoints omega^(-s/Q) and omega^(-sp/Q) of the admissible B-sets."""
    omega: float = volume(params.n).omega
    exponent: float = params.s / params.Q
    return ThresholdReport(
        linear_threshold=omega ** (-exponent),
        power_threshold=omega ** (-exponent * params.p),
        omega=omega,
        params=params
        )

def constant_residual(B: float, form: InequalityForm, params: CriticalParams) -> float:
    """Residual of the inequality on u = 1, where the seminorm vanishes."""
    omega: float = volume(params.n).omega
    match form:
        case InequalityForm.LINEAR:
            return B * omega ** (1.0 / params.p) - omega ** (1.0 / params.q)
        case InequalityForm.POWER:
            return B * omega - omega ** (params.p / params.q)
        case _:
            raise ValueError(f"Unknown inequality form: {form}")

def constant_violation_certificate(B: float, form: InequalityForm, params: CriticalParams, cfg: McConfig | None = None) -> ExperimentReport:
    """
    Test the inequality on the constant function 1.

    The verdict compares B with the threshold directly, so it flips exactly
    at the threshold; the residual is reported alongside.
    """
    report: ExperimentReport = ExperimentReport("constant_violation_certificate", {"B": B, "form": form.value, **params.to_dict()})
    threshold: float = thresholds(params).threshold(form)
    residual: float = constant_residual(B, form, params)

    if B < threshold:
        verdict: Verdict = Verdict.VIOLATED
    elif B == threshold:
        verdict = Verdict.BOUNDARY
    else:
        verdict = Verdict.SATISFIED

    report.add_quantity("threshold", threshold, provenance=Provenance.QUADRATURE)
    report.add_quantity("residual", residual, provenance=Provenance.QUADRATURE)
    report.set_verdict("constant", verdict)
    if verdict is Verdict.VIOLATED and not residual < 0:
        report.notes.append(f"Residual {residual!r} rounds to nonnegative just below the threshold.")

    logger.info(f"[constant_violation_certificate] - B={B!r}, {form.value}: threshold {threshold!r}, residual {residual!r}, {verdict.value}.")
    return report

def threshold_identity_error(report: ThresholdReport) -> float:
    """Relative error of linear_threshold^p = power_threshold."""
    return abs(report.linear_threshold ** report.params.p - report.power_threshold) / report.power_threshold

def certificate_flips(params: CriticalParams, form: InequalityForm, offset: float = 0.01) -> dict[str, Verdict]:
    threshold: float = thresholds(params).threshold(form)
    return {
        "below": constant_violation_certificate(threshold - offset, form, params).verdicts["constant"],
        "at": constant_violation_certificate(threshold, form, params).verdicts["constant"],
        "above": constant_violation_certificate(threshold + offset, form, params).verdicts["constant"]
        }
