import functools
import logging
import math
from typing import NamedTuple

import numpy as np
from scipy import integrate

from ..exceptions import QuadratureError
from ..estimators.chunks import STREAM_SPHERE, Chunk, ChunkPlan, chunk_rng, chunked_mean
from ..estimators.mc_config import Estimate, McConfig
from ..functions.test_function import TestFunction

from .sphere_point import SpherePoint

logger: logging.Logger = logging.getLogger(__name__)

QUAD_TOLERANCE: float = 1e-10
UNIFORM_CHUNK: int = 4096

class SphereMeasure(NamedTuple):
    n: int
    omega: float
    density_ratio: float

    @property
    def round_area(self) -> float:
        return round_area(self.n)

def inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hermitian product sum_j a_j conj(b_j) of raw coordinate arrays."""
    half: int = a.shape[-1] // 2
    ar, ai = a[..., :half], a[..., half:]
    br, bi = b[..., :half], b[..., half:]
    return np.sum(ar * br + ai * bi, axis=-1) + 1j * np.sum(ai * br - ar * bi, axis=-1)

def distance_coords(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return math.sqrt(2.0) * np.sqrt(np.abs(1.0 - inner(a, b)))

def cr_distance(a: SpherePoint, b: SpherePoint) -> np.ndarray | float:
    a.check_same_dimension(b)
    d: np.ndarray = distance_coords(a.coords, b.coords)
    return float(d) if d.ndim == 0 else d

def uniform_coords(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    gauss: np.ndarray = rng.standard_normal((count, 2 * n + 2))
    return gauss / np.linalg.norm(gauss, axis=1, keepdims=True)

def sample_uniform(n: int, count: int, seed: int) -> SpherePoint:
    if count < 1:
        raise ValueError(f"Sample count must be at least 1: {count}")

    plan: ChunkPlan = ChunkPlan.create_chunks(count, UNIFORM_CHUNK)
    blocks: list[np.ndarray] = [uniform_coords(n, chunk.length, chunk_rng(seed, STREAM_SPHERE, chunk.index)) for chunk in plan]
    return SpherePoint(np.concatenate(blocks), normalize=False)

def round_area(n: int) -> float:
    return 2.0 * math.pi ** (n + 1) / math.factorial(n)

def omega_exact(n: int) -> float:
    # The Jacobian integral in closed form equals the round area.
    return round_area(n)

@functools.cache
def volume(n: int) -> SphereMeasure:
    """
    Total volume of the sphere as the integral of the Cayley Jacobian over H^n.

    The integrand depends on |z| = r and |t| only. With r = tan(psi) and
    t = (1 + r^2) tan(phi) the reduced integral lives on [0, pi/2]^2.
    """
    if n < 1:
        raise ValueError(f"Complex dimension must be at least 1: {n}")

    # Area of the unit sphere S^(2n-1) in C^n = R^(2n).
    inner_area: float = 2.0 * math.pi**n / math.gamma(n)
    prefactor: float = 2.0 * 2.0 ** (2 * n + 1) * inner_area

    def integrand(phi: float, psi: float) -> float:
        return math.sin(psi) ** (2 * n - 1) * math.cos(psi) ** (2 * n + 1) * math.cos(phi) ** (2 * n)

    value, error = integrate.dblquad(integrand, 0.0, math.pi / 2, 0.0, math.pi / 2, epsabs=QUAD_TOLERANCE, epsrel=0.0)
    if error > QUAD_TOLERANCE:
        raise QuadratureError(error, QUAD_TOLERANCE, what=f"sphere volume (n={n})")

    omega: float = prefactor * value
    measure: SphereMeasure = SphereMeasure(n=n, omega=omega, density_ratio=omega / round_area(n))
    logger.debug(f"[volume] - n={n}: omega={omega!r}, density_ratio={measure.density_ratio!r}.")
    return measure

def mean(u: TestFunction, cfg: McConfig) -> Estimate:
    if u.is_constant:
        return Estimate.exact(u.constant_value, cfg.samples, cfg.seed)

    plan: ChunkPlan = cfg.plan()

    def run_chunk(chunk: Chunk) -> float:
        coords: np.ndarray = uniform_coords(u.n, chunk.length, chunk_rng(cfg.seed, STREAM_SPHERE, chunk.index))
        return float(np.mean(u(coords)))

    value, std_error = chunked_mean(run_chunk, plan, cfg.threads)
    logger.debug(f"[mean] - {u.label}: {value!r} +/- {std_error!r}.")
    return Estimate(value, std_error, cfg.samples, 0.0, cfg.seed)

def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary of size n+1 via QR with phase correction."""
    size: int = n + 1
    gauss: np.ndarray = (rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))) / math.sqrt(2.0)
    q, r = np.linalg.qr(gauss)
    phases: np.ndarray = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases

def apply_unitary(matrix: np.ndarray, point: SpherePoint) -> SpherePoint:
    return SpherePoint.from_complex(point.w @ matrix.T)

def quasi_triangle_constant(n: int, count: int, seed: int) -> float:
    """Largest observed d(a,b) / (d(a,c) + d(c,b)) over random triples (at least 1)."""
    rng: np.random.Generator = chunk_rng(seed, STREAM_SPHERE, 0)
    a, b, c = (uniform_coords(n, count, rng) for _ in range(3))

    direct: np.ndarray = distance_coords(a, b)
    detour: np.ndarray = distance_coords(a, c) + distance_coords(c, b)
    mask: np.ndarray = detour > 0
    return max(1.0, float(np.max(direct[mask] / detour[mask]))) if np.any(mask) else 1.0
