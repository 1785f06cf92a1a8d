import logging
import math
from typing import NamedTuple

from ..enums import InequalityForm, Side
from ..exceptions import DegenerateInputError
from ..functions.test_function import TestFunction
from ..geometry.sphere import mean

from .mc_config import Estimate, McConfig, combined_error
from .norms import lp_norm
from .seminorm import check_exponents, gagliardo

logger: logging.Logger = logging.getLogger(__name__)

def ratio_estimate(numerator: Estimate, denominator: Estimate) -> Estimate:
    """Delta-method quotient of two estimates."""
    if denominator.value == 0:
        raise DegenerateInputError(f"Ratio with a zero denominator: {numerator.value!r} / 0")

    value: float = numerator.value / denominator.value
    std_error: float = combined_error(
        numerator.std_error / abs(denominator.value),
        abs(value) * denominator.std_error / abs(denominator.value)
        )
    return Estimate(value, std_error, max(numerator.samples, denominator.samples), 0.0, numerator.seed)

class InequalityTerms(NamedTuple):
    """Measured sides of a critical Sobolev inequality for one function."""
    seminorm_p: Estimate
    lp: Estimate
    critical: Estimate
    p: float

    @property
    def seminorm(self) -> Estimate:
        return self.seminorm_p.power(1.0 / self.p)

    def linear(self, A: float, B: float) -> Estimate:
        """A [u] + B ||u||_p - ||u||_{p*}."""
        seminorm: Estimate = self.seminorm
        return Estimate(
            A * seminorm.value + B * self.lp.value - self.critical.value,
            combined_error(A * seminorm.std_error, B * self.lp.std_error, self.critical.std_error),
            self.critical.samples,
            A * seminorm.tail_bound,
            self.critical.seed
            )

    def power(self, A: float, B: float) -> Estimate:
        """A [u]^p + B ||u||_p^p - ||u||_{p*}^p."""
        lp: Estimate = self.lp.power(self.p)
        critical: Estimate = self.critical.power(self.p)
        return Estimate(
            A * self.seminorm_p.value + B * lp.value - critical.value,
            combined_error(A * self.seminorm_p.std_error, B * lp.std_error, critical.std_error),
            self.critical.samples,
            A * self.seminorm_p.tail_bound,
            self.critical.seed
            )

    def residual(self, A: float, B: float, form: InequalityForm) -> Estimate:
        match form:
            case InequalityForm.LINEAR:
                return self.linear(A, B)
            case InequalityForm.POWER:
                return self.power(A, B)
            case _:
                raise ValueError(f"Unknown inequality form: {form}")

    def leading_constant(self, B: float, form: InequalityForm) -> Estimate:
        """Smallest A making the residual vanish: (||u||_{p*} - B ||u||_p) / [u], or its power analogue."""
        match form:
            case InequalityForm.LINEAR:
                numerator: Estimate = Estimate(
                    self.critical.value - B * self.lp.value,
                    combined_error(self.critical.std_error, B * self.lp.std_error),
                    self.critical.samples
                    )
                return ratio_estimate(numerator, self.seminorm)
            case InequalityForm.POWER:
                lp: Estimate = self.lp.power(self.p)
                critical: Estimate = self.critical.power(self.p)
                numerator = Estimate(
                    critical.value - B * lp.value,
                    combined_error(critical.std_error, B * lp.std_error),
                    self.critical.samples
                    )
                return ratio_estimate(numerator, self.seminorm_p)
            case _:
                raise ValueError(f"Unknown inequality form: {form}")

    @property
    def sobolev_ratio(self) -> Estimate:
        return ratio_estimate(self.critical, self.seminorm)

def critical_exponent(n: int, s: float, p: float) -> float:
    Q: int = 2 * n + 2
    if not s * p < Q:
        raise ValueError(f"Product s*p must be below Q={Q}: {s * p}")

    return Q * p / (Q - s * p)

def inequality_terms(u: TestFunction, s: float, p: float, cfg: McConfig, side: Side = Side.SPHERE) -> InequalityTerms:
    check_exponents(s, p)
    q: float = critical_exponent(u.n, s, p)

    return InequalityTerms(
        seminorm_p=gagliardo(u, s, p, side, cfg),
        lp=lp_norm(u, p, cfg, side),
        critical=lp_norm(u, q, cfg, side),
        p=p
        )

def residual_linear(u: TestFunction, A: float, B: float, s: float, p: float, cfg: McConfig, side: Side = Side.SPHERE) -> Estimate:
    residual: Estimate = inequality_terms(u, s, p, cfg, side).linear(A, B)
    logger.debug(f"[residual_linear] - {u.label}, A={A!r}, B={B!r}: {residual.value!r} +/- {residual.std_error!r}.")
    return residual

def residual_power(u: TestFunction, A: float, B: float, s: float, p: float, cfg: McConfig, side: Side = Side.SPHERE) -> Estimate:
    residual: Estimate = inequality_terms(u, s, p, cfg, side).power(A, B)
    logger.debug(f"[residual_power] - {u.label}, A={A!r}, B={B!r}: {residual.value!r} +/- {residual.std_error!r}.")
    return residual

def centered(u: TestFunction, cfg: McConfig) -> TestFunction:
    """u minus its Monte-Carlo mean, flagged mean-zero."""
    average: Estimate = mean(u, cfg)
    shifted: TestFunction = u.shifted(-average.value)
    shifted.is_mean_zero = True
    return shifted

def poincare_ratio(u: TestFunction, s: float, p: float, cfg: McConfig) -> Estimate:
    """||u - mean(u)||_p / [u]_{s,p}."""
    check_exponents(s, p)
    if u.is_constant:
        raise DegenerateInputError(f"Poincare ratio is 0/0 for the constant {u.label}")

    seminorm: Estimate = gagliardo(u, s, p, Side.SPHERE, cfg).power(1.0 / p)
    if seminorm.value <= 0 or not math.isfinite(seminorm.value):
        raise DegenerateInputError(f"Seminorm of {u.label} vanished numerically: {seminorm.value!r}")

    deviation: Estimate = lp_norm(centered(u, cfg), p, cfg)
    return ratio_estimate(deviation, seminorm)
