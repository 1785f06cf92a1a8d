"""
Scalar inequalities behind the endpoint results.

Each check draws its random instances from the scalar substream of the
seed and counts violations beyond ``VIOLATION_TOLERANCE``.
"""
from collections.abc import Sequence
import logging

import numpy as np
from numpy.typing import ArrayLike
from scipy import optimize

from ..enums import Provenance, Verdict
from ..estimators.chunks import STREAM_SCALAR, chunk_rng
from ..geometry.sphere import volume
from ..report import ExperimentReport

from .critical_params import CriticalParams
from .thresholds import thresholds

logger: logging.Logger = logging.getLogger(__name__)

VIOLATION_TOLERANCE: float = 1e-9
DIFFERENCE_STEP: float = 1e-3
DERIVATIVE_STEP: float = 1e-4
DIFFERENCE_TOLERANCE: float = 1e-6
RANDOM_TRIALS: int = 10**5
SEED: int = 0

F_GRID_POINTS: int = 10**4
F_GRID_RANGE: tuple[float, float] = (1e-8, 1e8)

DEFAULT_TAU_GRID: np.ndarray = np.geomspace(1e-4, 1e8, 24001)

def _verdict(passed: bool) -> Verdict:
    return Verdict.PASS if passed else Verdict.FAIL

def scalar_phi(t: ArrayLike, v: np.ndarray, weights: np.ndarray, q: float) -> np.ndarray:
    """Phi(t) = (sum_i w_i |1 + t v_i|^q)^(2/q), vectorized over t."""
    t = np.asarray(t, dtype=float)
    shifted: np.ndarray = np.abs(1.0 + t[..., None] * v) ** q
    return np.sum(weights * shifted, axis=-1) ** (2.0 / q)

def _discrete_norm(u: np.ndarray, weights: np.ndarray, q: float) -> np.ndarray:
    return np.sum(weights * np.abs(u) ** q, axis=-1) ** (1.0 / q)

def scalar_phi_check(
    q: float,
    v: ArrayLike,
    t_grid: Sequence[float] | None = None,
    n: int = 1,
    trials: int = RANDOM_TRIALS,
    seed: int = SEED
    ) -> ExperimentReport:
    """
    Phi on the discrete measure with equal atoms of total mass omega.

    ``v`` is centred and scaled to unit q-norm first; the zero vector is kept
    as is. Checks Phi(0) = omega^(2/q), Phi'(0) = 0 and second differences at
    most 2(q - 1), then the resulting inequality
    ||u||_q^2 <= omega^(2/q) mean(u)^2 + (q - 1) ||u - mean(u)||_q^2
    on random discrete u.
    """
    if not q >= 2:
        raise ValueError(f"Exponent q must be at least 2: {q}")

    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise ValueError("Sample vector must be finite and non-empty")

    omega: float = volume(n).omega
    weights: np.ndarray = np.full(v.size, omega / v.size)
    if np.any(v != 0):
        v = v - np.mean(v)
        v = v / _discrete_norm(v, weights, q)

    grid: np.ndarray = np.linspace(-2.0, 2.0, 401) if t_grid is None else np.asarray(t_grid, dtype=float)
    bound: float = 2.0 * (q - 1.0)

    phi_zero: float = float(scalar_phi(0.0, v, weights, q))
    phi_zero_target: float = omega ** (2.0 / q)
    h: float = DERIVATIVE_STEP
    phi_prime: float = float((scalar_phi(h, v, weights, q) - scalar_phi(-h, v, weights, q)) / (2.0 * h))

    h = DIFFERENCE_STEP
    second: np.ndarray = (scalar_phi(grid + h, v, weights, q) - 2.0 * scalar_phi(grid, v, weights, q) + scalar_phi(grid - h, v, weights, q)) / h**2
    max_second: float = float(np.max(second))

    rng: np.random.Generator = chunk_rng(seed, STREAM_SCALAR, 0)
    atoms: int = 8
    atom_weights: np.ndarray = np.full(atoms, omega / atoms)
    scale: np.ndarray = 10.0 ** rng.uniform(-2.0, 2.0, size=(trials, 1))
    u: np.ndarray = scale * (rng.standard_normal((trials, atoms)) + rng.standard_normal((trials, 1)))
    average: np.ndarray = np.sum(atom_weights * u, axis=-1) / omega
    lhs: np.ndarray = _discrete_norm(u, atom_weights, q) ** 2
    rhs: np.ndarray = omega ** (2.0 / q) * average**2 + (q - 1.0) * _discrete_norm(u - average[:, None], atom_weights, q) ** 2
    excess: np.ndarray = lhs - rhs
    violations: int = int(np.count_nonzero(excess > VIOLATION_TOLERANCE * np.maximum(1.0, lhs)))

    report: ExperimentReport = ExperimentReport("scalar_phi", {"q": q, "n": n, "atoms": int(v.size), "trials": trials, "seed": seed})
    report.add_quantity("phi_zero", phi_zero)
    report.add_quantity("phi_zero_target", phi_zero_target, provenance=Provenance.QUADRATURE)
    report.add_quantity("phi_prime_zero", phi_prime)
    report.add_quantity("max_second_difference", max_second)
    report.add_quantity("second_difference_bound", bound)
    report.add_quantity("violations", violations)
    report.add_quantity("max_excess", float(np.max(excess)))

    report.set_verdict("phi_zero", _verdict(abs(phi_zero - phi_zero_target) <= 1e-12 * phi_zero_target))
    report.set_verdict("phi_prime_zero", _verdict(abs(phi_prime) <= DIFFERENCE_TOLERANCE))
    report.set_verdict("second_difference", _verdict(max_second <= bound + DIFFERENCE_TOLERANCE))
    report.set_verdict("inequality", _verdict(violations == 0))

    logger.info(f"[scalar_phi_check] - q={q!r}: max second difference {max_second:.6g} <= {bound:.6g}, {violations} violations.")
    return report

def scalar_F(t: ArrayLike, q: float) -> np.ndarray:
    """F(t) = (|1 + t|^q - 1 - q t) / |t|^q, with F(0) = 0."""
    t = np.asarray(t, dtype=float)
    safe: np.ndarray = np.where(t > -1.0, t, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        # expm1/log1p keep the cancellation in |1+t|^q - 1 under control near 0.
        head: np.ndarray = np.where(t > -1.0, np.expm1(q * np.log1p(safe)), np.abs(1.0 + t) ** q - 1.0)
        value: np.ndarray = (head - q * t) / np.abs(t) ** q

    return np.where(t == 0, 0.0, value)

def _check_F_exponent(q: float) -> None:
    if not 1 < q < 2:
        raise ValueError(f"Exponent q must lie in (1, 2): {q}")

def scalar_F_sup(q: float) -> float:
    """
    C_q = sup F over a log-spaced grid on both half-lines, refined around the
    best grid point, together with the limits F(0) = 0 and F(+-inf) = 1.
    """
    _check_F_exponent(q)

    magnitudes: np.ndarray = np.geomspace(*F_GRID_RANGE, F_GRID_POINTS)
    grid: np.ndarray = np.concatenate([-magnitudes[::-1], magnitudes])
    values: np.ndarray = scalar_F(grid, q)
    best: int = int(np.nanargmax(values))
    sup: float = float(values[best])

    low: float = float(grid[max(best - 1, 0)])
    high: float = float(grid[min(best + 1, len(grid) - 1)])
    if low < 0 < high:
        low, high = (low, -F_GRID_RANGE[0]) if grid[best] < 0 else (F_GRID_RANGE[0], high)

    if low < high:
        refined = optimize.minimize_scalar(lambda t: -float(scalar_F(t, q)), bounds=(low, high), method="bounded", options={"xatol": 1e-12})
        if refined.success:
            sup = max(sup, -float(refined.fun))

    limit_sup: float = max(sup, 0.0, 1.0)
    logger.debug(f"[scalar_F_sup] - q={q!r}: grid sup {float(values[best])!r} at t={float(grid[best])!r}, C_q={limit_sup!r}.")
    return limit_sup

def scalar_F_check(q: float, trials: int = RANDOM_TRIALS, seed: int = SEED) -> ExperimentReport:
    """|a+b|^q <= |a|^q + q |a|^(q-1) sgn(a) b + C_q |b|^q on random pairs."""
    _check_F_exponent(q)
    C_q: float = scalar_F_sup(q)

    rng: np.random.Generator = chunk_rng(seed, STREAM_SCALAR, 1)
    a: np.ndarray = rng.standard_normal(trials) * 10.0 ** rng.uniform(-3.0, 3.0, size=trials)
    b: np.ndarray = rng.standard_normal(trials) * 10.0 ** rng.uniform(-3.0, 3.0, size=trials)
    lhs: np.ndarray = np.abs(a + b) ** q
    rhs: np.ndarray = np.abs(a) ** q + q * np.abs(a) ** (q - 1.0) * np.sign(a) * b + C_q * np.abs(b) ** q
    excess: np.ndarray = lhs - rhs
    violations: int = int(np.count_nonzero(excess > VIOLATION_TOLERANCE * np.maximum(1.0, lhs)))

    report: ExperimentReport = ExperimentReport("scalar_F", {"q": q, "trials": trials, "seed": seed})
    report.add_quantity("C_q", C_q)
    report.add_quantity("F_minus_one", float(scalar_F(-1.0, q)))
    report.add_quantity("F_large", float(scalar_F(F_GRID_RANGE[1], q)))
    report.add_quantity("violations", violations)
    report.add_quantity("max_excess", float(np.max(excess)))
    report.set_verdict("inequality", _verdict(violations == 0))

    logger.info(f"[scalar_F_check] - q={q!r}: C_q={C_q:.6g}, {violations} violations.")
    return report

def young_boundary(B: float, params: CriticalParams) -> float:
    """tau at which (1 + 1/tau)^(p-1) times the power threshold equals B."""
    threshold: float = thresholds(params).power_threshold
    return 1.0 / ((B / threshold) ** (1.0 / (params.p - 1.0)) - 1.0)

def young_split_constants(B: float, A0: float, params: CriticalParams, tau_grid: Sequence[float] | None = None) -> tuple[float, float]:
    """
    Smallest grid tau with (1 + 1/tau)^(p-1) * threshold < B, and
    A_B = (1 + tau)^(p-1) * A0^p.
    """
    threshold: float = thresholds(params).power_threshold
    if not B > threshold:
        raise ValueError(f"B must exceed the power threshold {threshold!r}: {B}")
    if A0 < 0:
        raise ValueError(f"A0 must be nonnegative: {A0}")

    grid: np.ndarray = np.sort(np.asarray(DEFAULT_TAU_GRID if tau_grid is None else tau_grid, dtype=float))
    feasible: np.ndarray = grid[(grid > 0) & ((1.0 + 1.0 / np.where(grid > 0, grid, 1.0)) ** (params.p - 1.0) * threshold < B)]
    if feasible.size == 0:
        raise ValueError(f"No grid tau separates B={B!r} from the threshold {threshold!r}")

    tau: float = float(feasible[0])
    A_B: float = (1.0 + tau) ** (params.p - 1.0) * A0**params.p
    logger.debug(f"[young_split_constants] - B={B!r}: boundary tau {young_boundary(B, params)!r}, grid tau {tau!r}, A_B={A_B!r}.")
    return tau, A_B

def young_split_check(p: float, trials: int = RANDOM_TRIALS, seed: int = SEED) -> ExperimentReport:
    """(x+y)^p <= (1+tau)^(p-1) x^p + (1+1/tau)^(p-1) y^p on random x, y >= 0 and tau > 0."""
    if not p >= 1:
        raise ValueError(f"Exponent p must be at least 1: {p}")

    rng: np.random.Generator = chunk_rng(seed, STREAM_SCALAR, 2)
    x: np.ndarray = rng.uniform(0.0, 10.0, size=trials)
    y: np.ndarray = rng.uniform(0.0, 10.0, size=trials)
    tau: np.ndarray = 10.0 ** rng.uniform(-3.0, 3.0, size=trials)
    lhs: np.ndarray = (x + y) ** p
    rhs: np.ndarray = (1.0 + tau) ** (p - 1.0) * x**p + (1.0 + 1.0 / tau) ** (p - 1.0) * y**p
    excess: np.ndarray = lhs - rhs
    violations: int = int(np.count_nonzero(excess > VIOLATION_TOLERANCE * np.maximum(1.0, lhs)))

    report: ExperimentReport = ExperimentReport("young_split", {"p": p, "trials": trials, "seed": seed})
    report.add_quantity("violations", violations)
    report.add_quantity("max_excess", float(np.max(excess)))
    report.set_verdict("inequality", _verdict(violations == 0))
    return report

def young_split_report(B: float, A0: float, params: CriticalParams) -> ExperimentReport:
    tau, A_B = young_split_constants(B, A0, params)
    report: ExperimentReport = young_split_check(params.p)
    report.params.update({"B": B, "A0": A0, **params.to_dict()})
    report.add_quantity("tau_boundary", young_boundary(B, params))
    report.add_quantity("tau", tau)
    report.add_quantity("A_B", A_B)
    report.flags["tau_beyond_boundary"] = tau > young_boundary(B, params)
    return report

def scalar_suite(params: CriticalParams, trials: int = RANDOM_TRIALS, seed: int = SEED) -> ExperimentReport:
    """Phi check at q = max(p*, 2), F check at q = min(p*, 1.5) clipped into (1, 2), and the Young split at p."""
    report: ExperimentReport = ExperimentReport("scalar_lemmas", {**params.to_dict(), "trials": trials, "seed": seed})

    rng: np.random.Generator = chunk_rng(seed, STREAM_SCALAR, 3)
    q_phi: float = max(params.q, 2.0)
    report.merge(scalar_phi_check(q_phi, rng.standard_normal(64), n=params.n, trials=trials, seed=seed), "phi")

    q_F: float = params.q if 1 < params.q < 2 else 1.5
    report.merge(scalar_F_check(q_F, trials, seed), "F")
    report.merge(young_split_check(params.p, trials, seed), "young")
    return report
