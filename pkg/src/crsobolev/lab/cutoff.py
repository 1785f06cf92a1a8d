import logging

from ..enums import Provenance, Verdict
from ..exceptions import ConfigurationError
from ..estimators.mc_config import Estimate, McConfig, combined_error
from ..estimators.norms import lp_integral
from ..estimators.seminorm import gagliardo, kernel_mass, kernel_mass_mc
from ..functions.families import product
from ..functions.test_function import TestFunction
from ..report import ExperimentReport, agreement, residual_holds

from .critical_params import CriticalParams

logger: logging.Logger = logging.getLogger(__name__)

def cutoff_constants(phi: TestFunction, params: CriticalParams) -> tuple[float, float]:
    """C1 = 2^(p-1) sup|phi|^p and C2 = 2^(p-1) Lip(phi)^p M."""
    if phi.sup_bound is None or phi.lipschitz_bound is None:
        raise ConfigurationError(f"Cutoff estimate needs sup and Lipschitz bounds for {phi.label}")

    p: float = params.p
    factor: float = 2.0 ** (p - 1.0)
    return factor * phi.sup_bound**p, factor * phi.lipschitz_bound**p * kernel_mass(params.n, params.s, p)

def cutoff_estimate_check(phi: TestFunction, u: TestFunction, params: CriticalParams, cfg: McConfig | None = None) -> ExperimentReport:
    """[phi u]^p <= C1 [u]^p + C2 ||u||_p^p for a bounded Lipschitz multiplier phi."""
    cfg = cfg or McConfig()
    s: float = params.s
    p: float = params.p
    C1, C2 = cutoff_constants(phi, params)

    report: ExperimentReport = ExperimentReport("cutoff_estimate", {"phi": phi.label, "u": u.label, **params.to_dict()})
    report.add_quantity("C1", C1)
    report.add_quantity("C2", C2, provenance=Provenance.QUADRATURE)

    mass: float = kernel_mass(params.n, s, p)
    mass_mc: Estimate = kernel_mass_mc(params.n, s, p, cfg)
    report.add_quantity("kernel_mass", mass, provenance=Provenance.QUADRATURE)
    report.add_estimate("kernel_mass_mc", mass_mc)
    report.set_verdict("kernel_mass", agreement(mass, mass_mc.value, mass_mc.std_error))

    lhs: Estimate = gagliardo(product(phi, u), s, p, cfg=cfg)
    seminorm_p: Estimate = gagliardo(u, s, p, cfg=cfg)
    lp_p: Estimate = lp_integral(u, p, cfg)

    # Pairs inside a diagonal cutoff are missing from both seminorms; the
    # right side gets them back through its tail bound.
    rhs: float = C1 * seminorm_p.upper + C2 * lp_p.value
    slack: float = rhs - lhs.value
    error: float = combined_error(lhs.std_error, C1 * seminorm_p.std_error, C2 * lp_p.std_error)

    report.add_estimate("lhs", lhs)
    report.add_quantity("rhs", rhs, combined_error(C1 * seminorm_p.std_error, C2 * lp_p.std_error), Provenance.MONTE_CARLO)
    report.add_quantity("slack", slack, error, Provenance.MONTE_CARLO)
    report.set_verdict("cutoff", Verdict.PASS if residual_holds(slack, error) else Verdict.FAIL)

    logger.info(f"[cutoff_estimate_check] - {phi.label} * {u.label}: slack {slack:.6g} +/- {error:.3g}, {report.overall.value}.")
    return report
