import logging
from typing import NamedTuple

import numpy as np

from ..enums import Domain, Provenance, Verdict
from ..estimators.chunks import STREAM_BALL, Chunk, ChunkPlan, batch_means, chunk_rng, map_chunks
from ..estimators.mc_config import McConfig
from ..functions.test_function import TestFunction
from ..report import SIGMA_BAND, ExperimentReport, classify_slack

from .heisenberg import ball_volume, dilate, distance, group_law, unit_ball_coords
from .heisenberg_point import HeisenbergPoint

logger: logging.Logger = logging.getLogger(__name__)

# Pairwise work is quadratic in the chunk length.
PAIR_CHUNK: int = 512

class PoincareSides(NamedTuple):
    deviation: float
    double_integral: float

def poincare_constant(n: int, s: float, p: float) -> float:
    """2^(Q+sp) / |B_1(0)|."""
    return 2.0 ** (2 * n + 2 + s * p) / ball_volume(n)

def _pair_sides(U: TestFunction, points: np.ndarray, cell: float, s: float, p: float) -> PoincareSides:
    """
    Both sides of the local inequality for the empirical measure on ``points``.

    ``cell`` is the mass of one point; the double integral runs over distinct
    pairs only.
    """
    n: int = U.n
    count: int = len(points)
    values: np.ndarray = U(points)
    deviation: float = float(np.sum(np.abs(values - np.mean(values)) ** p)) * cell
    if count < 2:
        return PoincareSides(deviation, 0.0)

    rho: np.ndarray = np.asarray(distance(HeisenbergPoint(points[:, None, :]), HeisenbergPoint(points[None, :, :])))
    difference: np.ndarray = np.abs(values[:, None] - values[None, :]) ** p
    off_diagonal: np.ndarray = ~np.eye(count, dtype=bool) & (rho > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        kernel: np.ndarray = np.where(off_diagonal, difference / rho ** (2 * n + 2 + s * p), 0.0)

    # Distinct pairs carry mass cell^2 * count / (count - 1) so the statistic is unbiased.
    double_integral: float = float(np.sum(kernel)) * cell**2 * count / (count - 1)
    return PoincareSides(deviation, double_integral)

def local_poincare_check(U: TestFunction, r: float, center: HeisenbergPoint, s: float, p: float, cfg: McConfig) -> ExperimentReport:
    """
    Monte-Carlo check of the local Poincaré inequality on B_r(center):
    the integral of |U - U_B|^p is at most C r^(sp) times the localized
    seminorm, with C = 2^(Q+sp) / |B_1(0)|.
    """
    if not r > 0:
        raise ValueError(f"Ball radius must be positive: {r}")
    if not p >= 1:
        raise ValueError(f"Integrability p must be at least 1: {p}")
    if not 0 < s < 1:
        raise ValueError(f"Smoothness s must lie in (0, 1): {s}")
    if U.domain is not Domain.HEISENBERG:
        raise ValueError(f"Local Poincaré check needs a Heisenberg function: {U.label}")

    n: int = U.n
    Q: int = 2 * n + 2
    volume: float = r**Q * ball_volume(n)
    constant: float = poincare_constant(n, s, p)
    plan: ChunkPlan = ChunkPlan.create_chunks(cfg.samples, min(cfg.chunk, PAIR_CHUNK))

    def run_chunk(chunk: Chunk) -> PoincareSides:
        unit: np.ndarray = unit_ball_coords(n, chunk.length, chunk_rng(cfg.seed, STREAM_BALL, chunk.index))
        points: np.ndarray = group_law(center, dilate(r, HeisenbergPoint(unit))).coords
        return _pair_sides(U, points, volume / chunk.length, s, p)

    sides: list[PoincareSides] = map_chunks(run_chunk, plan, cfg.threads)
    deviations: np.ndarray = np.array([side.deviation for side in sides])
    doubles: np.ndarray = np.array([side.double_integral for side in sides])
    slacks: np.ndarray = constant * r ** (s * p) * doubles - deviations

    deviation, deviation_se = batch_means(deviations, plan.sizes)
    double_integral, double_se = batch_means(doubles, plan.sizes)
    slack, slack_se = batch_means(slacks, plan.sizes)

    report: ExperimentReport = ExperimentReport("local_poincare", {"function": U.label, "r": r, "s": s, "p": p, "n": n})
    report.add_quantity("constant", constant, provenance=Provenance.QUADRATURE)
    report.add_quantity("lhs", deviation, deviation_se, Provenance.MONTE_CARLO)
    report.add_quantity("rhs", double_integral, double_se, Provenance.MONTE_CARLO)
    report.add_quantity("slack", slack, slack_se, Provenance.MONTE_CARLO)
    report.set_verdict("inequality", Verdict.PASS if slack >= -SIGMA_BAND * slack_se else Verdict.FAIL)
    report.set_verdict("slack", classify_slack(slack, slack_se))
    report.flags["strict_on_every_chunk"] = bool(np.all(slacks >= 0))

    logger.info(f"[local_poincare] - {U.label}, r={r!r}: lhs {deviation:.6g}, rhs {double_integral:.6g}, slack {slack:.6g} +/- {slack_se:.3g}.")
    return report

def local_poincare_grid(U: TestFunction, r: float, center: HeisenbergPoint, s: float, p: float, resolution: int = 14) -> PoincareSides:
    """Midpoint-grid value of both sides on B_r(center) for n = 1."""
    if U.n != 1:
        raise ValueError(f"Grid oracle is implemented for n=1 only: {U.n}")
    if not r > 0:
        raise ValueError(f"Ball radius must be positive: {r}")

    h: float = 2.0 / resolution
    mids: np.ndarray = -1.0 + h * (np.arange(resolution) + 0.5)
    grid: np.ndarray = np.stack(np.meshgrid(mids, mids, mids, indexing="ij"), axis=-1).reshape(-1, 3)
    inside: np.ndarray = grid[(grid[:, 0] ** 2 + grid[:, 1] ** 2) ** 2 + grid[:, 2] ** 2 < 1.0]

    points: np.ndarray = group_law(center, dilate(r, HeisenbergPoint(inside))).coords
    # Cells of the unit grid scale by r^Q under the dilation.
    cell: float = h**3 * r**4
    sides: PoincareSides = _pair_sides(U, points, cell, s, p)
    # The grid statistic uses count/(count-1) pair weights; undo that for a plain Riemann sum.
    count: int = len(points)
    return PoincareSides(sides.deviation, sides.double_integral * (count - 1) / count)
