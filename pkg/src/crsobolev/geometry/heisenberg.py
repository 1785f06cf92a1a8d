import functools
import logging
import math

import numpy as np
from scipy import integrate, special

from ..exceptions import QuadratureError
from ..estimators.chunks import STREAM_BALL, Chunk, ChunkPlan, chunk_rng, chunked_mean
from ..estimators.mc_config import Estimate, McConfig

from .heisenberg_point import HeisenbergPoint

logger: logging.Logger = logging.getLogger(__name__)

QUAD_TOLERANCE: float = 1e-10
BALL_CHUNK: int = 4096

def group_law(a: HeisenbergPoint, b: HeisenbergPoint) -> HeisenbergPoint:
    a.check_same_dimension(b)
    n: int = a.n

    xa, ya = a.x, a.y
    xb, yb = b.x, b.y
    # Im(z_a . conj(z_b)) summed over the complex coordinates.
    twist: np.ndarray = np.sum(ya * xb - xa * yb, axis=-1)

    coords: np.ndarray = np.empty(np.broadcast_shapes(a.coords.shape, b.coords.shape))
    coords[..., :n] = xa + xb
    coords[..., n:2 * n] = ya + yb
    coords[..., -1] = a.t + b.t + 2.0 * twist
    return HeisenbergPoint(coords)

def group_inverse(a: HeisenbergPoint) -> HeisenbergPoint:
    return HeisenbergPoint(-a.coords)

def dilate(lam: float, a: HeisenbergPoint) -> HeisenbergPoint:
    if not lam > 0:
        raise ValueError(f"Dilation factor must be positive: {lam}")

    coords: np.ndarray = a.coords.copy()
    coords[..., :-1] *= lam
    coords[..., -1] *= lam * lam
    return HeisenbergPoint(coords)

def koranyi_gauge(a: HeisenbergPoint) -> np.ndarray | float:
    gauge: np.ndarray = np.sqrt(np.hypot(a.z_norm_squared, a.t))
    return float(gauge) if gauge.ndim == 0 else gauge

def distance(a: HeisenbergPoint, b: HeisenbergPoint) -> np.ndarray | float:
    return koranyi_gauge(group_law(group_inverse(b), a))

@functools.cache
def ball_volume(n: int) -> float:
    """
    Lebesgue volume of the unit Korányi ball B_1(0) in H^n.

    Integrates the slice length 2*sqrt(1 - r^4) against the area of the
    sphere of radius r in C^n. With r^4 = sin^2(theta) the integrand becomes
    sin^(n-1) cos^2, which is smooth on [0, pi/2].
    """
    if n < 1:
        raise ValueError(f"Complex dimension must be at least 1: {n}")

    sphere_area: float = 2.0 * math.pi**n / math.gamma(n)
    value, error = integrate.quad(lambda theta: math.sin(theta) ** (n - 1) * math.cos(theta) ** 2, 0.0, math.pi / 2, epsabs=QUAD_TOLERANCE, limit=200)
    if error > QUAD_TOLERANCE:
        raise QuadratureError(error, QUAD_TOLERANCE, what=f"unit ball volume (n={n})")

    volume: float = sphere_area * value
    logger.debug(f"[ball_volume] - |B_1(0)| for n={n}: {volume!r}.")
    return volume

def ball_volume_exact(n: int) -> float:
    return math.pi**n * special.beta(n / 2, 1.5) / math.gamma(n)

def unit_ball_coords(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    accepted: list[np.ndarray] = []
    remaining: int = count
    while remaining > 0:
        # The unit gauge ball sits inside [-1, 1]^(2n+1).
        draws: np.ndarray = rng.uniform(-1.0, 1.0, size=(max(2 * remaining, 64), 2 * n + 1))
        z_norm_squared: np.ndarray = np.sum(draws[:, :-1] ** 2, axis=1)
        inside: np.ndarray = draws[z_norm_squared**2 + draws[:, -1] ** 2 < 1.0]
        accepted.append(inside[:remaining])
        remaining -= len(accepted[-1])

    return np.concatenate(accepted)

def sample_ball(r: float, center: HeisenbergPoint, count: int, seed: int) -> HeisenbergPoint:
    """Uniform points of the gauge ball B_r(center), reproducible per (seed, chunk)."""
    if not r > 0:
        raise ValueError(f"Ball radius must be positive: {r}")
    if count < 1:
        raise ValueError(f"Sample count must be at least 1: {count}")

    plan: ChunkPlan = ChunkPlan.create_chunks(count, BALL_CHUNK)
    blocks: list[np.ndarray] = [
        unit_ball_coords(center.n, chunk.length, chunk_rng(seed, STREAM_BALL, chunk.index))
        for chunk in plan
        ]
    unit: HeisenbergPoint = HeisenbergPoint(np.concatenate(blocks))
    return group_law(center, dilate(r, unit))

def ball_volume_mc(r: float, n: int, cfg: McConfig) -> Estimate:
    """Box-acceptance estimate of |B_r(0)|; ``value / r**Q`` should not depend on ``r``."""
    if not r > 0:
        raise ValueError(f"Ball radius must be positive: {r}")

    box_volume: float = 2.0 ** (2 * n + 1) * r ** (2 * n + 2)
    plan: ChunkPlan = cfg.plan()

    def run_chunk(chunk: Chunk) -> float:
        rng: np.random.Generator = chunk_rng(cfg.seed, STREAM_BALL, chunk.index)
        draws: np.ndarray = rng.uniform(-1.0, 1.0, size=(chunk.length, 2 * n + 1))
        draws[:, :-1] *= r
        draws[:, -1] *= r * r
        point: HeisenbergPoint = HeisenbergPoint(draws)
        return float(np.mean(koranyi_gauge(point) < r))

    value, std_error = chunked_mean(run_chunk, plan, cfg.threads)
    return Estimate(box_volume * value, box_volume * std_error, cfg.samples, 0.0, cfg.seed)

def ball_volume_grid(n: int, resolution: int = 160) -> float:
    """Midpoint-grid count of the unit ball over its bounding box (n = 1 only)."""
    if n != 1:
        raise ValueError(f"Grid oracle is implemented for n=1 only: {n}")

    h: float = 2.0 / resolution
    mids: np.ndarray = -1.0 + h * (np.arange(resolution) + 0.5)
    x, y = np.meshgrid(mids, mids, indexing="ij")
    z4: np.ndarray = (x**2 + y**2) ** 2

    count: int = 0
    for t in mids:
        count += int(np.count_nonzero(z4 + t * t < 1.0))

    return count * h**3
