import logging

import numpy as np

from ..enums import Domain, Side
from ..functions.test_function import TestFunction
from ..geometry.cayley import inverse_coords, sample_weighted_coords
from ..geometry.sphere import uniform_coords, volume

from .chunks import STREAM_HEISENBERG, STREAM_SPHERE, Chunk, ChunkPlan, chunk_rng, chunked_mean
from .mc_config import Estimate, McConfig

logger: logging.Logger = logging.getLogger(__name__)

def sample_side(n: int, count: int, side: Side, seed: int, index: int) -> np.ndarray:
    """
    Sphere-side coordinates for one chunk.

    On the weighted side the points are drawn on H^n from J_c / omega and
    mapped back to the sphere, so sphere functions can be evaluated on them.
    """
    match side:
        case Side.SPHERE:
            return uniform_coords(n, count, chunk_rng(seed, STREAM_SPHERE, index))
        case Side.WEIGHTED_HEISENBERG:
            return inverse_coords(sample_weighted_coords(n, count, chunk_rng(seed, STREAM_HEISENBERG, index)))
        case _:
            raise ValueError(f"Unsupported measure side: {side}")

def _side_values(u: TestFunction, n: int, count: int, side: Side, seed: int, index: int) -> np.ndarray:
    if u.domain is Domain.HEISENBERG:
        if side is not Side.WEIGHTED_HEISENBERG:
            raise ValueError(f"Heisenberg function {u.label} needs the weighted Heisenberg measure")

        return u(sample_weighted_coords(n, count, chunk_rng(seed, STREAM_HEISENBERG, index)))

    return u(sample_side(n, count, side, seed, index))

def integral(u: TestFunction, cfg: McConfig, side: Side = Side.SPHERE, power: float = 1.0, absolute: bool = False) -> Estimate:
    """Estimate of the integral of u^power (or |u|^power) against dV, or against J_c on H^n."""
    omega: float = volume(u.n).omega
    if u.is_constant:
        c: float = u.constant_value
        base: float = abs(c) if absolute else c
        return Estimate.exact(omega * base**power, cfg.samples, cfg.seed)

    plan: ChunkPlan = cfg.plan()

    def run_chunk(chunk: Chunk) -> float:
        values: np.ndarray = _side_values(u, u.n, chunk.length, side, cfg.seed, chunk.index)
        if absolute:
            values = np.abs(values)
        return float(np.mean(values**power))

    value, std_error = chunked_mean(run_chunk, plan, cfg.threads)
    return Estimate(omega * value, omega * std_error, cfg.samples, 0.0, cfg.seed)

def lp_integral(u: TestFunction, r: float, cfg: McConfig, side: Side = Side.SPHERE) -> Estimate:
    if r < 1:
        raise ValueError(f"Lebesgue exponent must be at least 1: {r}")

    return integral(u, cfg, side, power=r, absolute=True)

def lp_norm(u: TestFunction, r: float, cfg: McConfig, side: Side = Side.SPHERE) -> Estimate:
    estimate: Estimate = lp_integral(u, r, cfg, side).power(1.0 / r)
    logger.debug(f"[lp_norm] - {u.label}, r={r!r}, {side.value}: {estimate.value!r} +/- {estimate.std_error!r}.")
    return estimate

def second_moment(phi: TestFunction, cfg: McConfig, side: Side = Side.SPHERE) -> Estimate:
    return integral(phi, cfg, side, power=2.0)
