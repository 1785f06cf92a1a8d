import logging
import math
from typing import Self

import numpy as np

from ..enums import Domain
from ..exceptions import PoleProximityError, SingularEvaluationError
from ..estimators.chunks import STREAM_HEISENBERG, Chunk, ChunkPlan, chunk_rng, chunked_mean
from ..estimators.mc_config import Estimate, McConfig
from ..functions.test_function import TestFunction

from .heisenberg_point import HeisenbergPoint
from .sphere import distance_coords
from .sphere_point import SpherePoint

logger: logging.Logger = logging.getLogger(__name__)

class CayleyContext:
    POLE_GUARD: float = 1e-9

    def __init__(self: Self, n: int, pole_guard: float = POLE_GUARD) -> None:
        if not pole_guard > 0:
            raise ValueError(f"Pole guard must be positive: {pole_guard}")

        self.n = n
        self.pole_guard = pole_guard

    @property
    def south_pole(self: Self) -> SpherePoint:
        return SpherePoint.south_pole(self.n)

    def __repr__(self: Self) -> str:
        return f"CayleyContext(n={self.n}, pole_guard={self.pole_guard!r})"

def pole_distance(coords: np.ndarray) -> np.ndarray:
    """|1 + zeta_(n+1)| for raw sphere coordinates."""
    n: int = coords.shape[-1] // 2 - 1
    return np.hypot(1.0 + coords[..., n], coords[..., 2 * n + 1])

def forward_coords(coords: np.ndarray) -> np.ndarray:
    n: int = coords.shape[-1] // 2 - 1
    half: int = n + 1
    w: np.ndarray = coords[..., :half] + 1j * coords[..., half:]
    last: np.ndarray = w[..., n]
    denominator: np.ndarray = 1.0 + last

    z: np.ndarray = w[..., :n] / denominator[..., None]
    t: np.ndarray = np.real(1j * (1.0 - last) / denominator)
    return np.concatenate([z.real, z.imag, t[..., None]], axis=-1)

def inverse_coords(coords: np.ndarray) -> np.ndarray:
    n: int = (coords.shape[-1] - 1) // 2
    z: np.ndarray = coords[..., :n] + 1j * coords[..., n:2 * n]
    t: np.ndarray = coords[..., -1]
    z_norm_squared: np.ndarray = np.sum(np.abs(z) ** 2, axis=-1)

    denominator: np.ndarray = t + 1j * (1.0 + z_norm_squared)
    head: np.ndarray = 2j * z / denominator[..., None]
    last: np.ndarray = (-t + 1j * (1.0 - z_norm_squared)) / denominator
    w: np.ndarray = np.concatenate([head, last[..., None]], axis=-1)
    return np.concatenate([w.real, w.imag], axis=-1)

def jacobian_coords(coords: np.ndarray) -> np.ndarray:
    n: int = (coords.shape[-1] - 1) // 2
    z_norm_squared: np.ndarray = np.sum(coords[..., :-1] ** 2, axis=-1)
    t: np.ndarray = coords[..., -1]
    return 2.0 ** (2 * n + 1) / ((1.0 + z_norm_squared) ** 2 + t * t) ** (n + 1)

def forward(zeta: SpherePoint, context: CayleyContext | None = None) -> HeisenbergPoint:
    guard: float = (context or CayleyContext(zeta.n)).pole_guard
    distance: np.ndarray = pole_distance(zeta.coords)
    if np.any(distance < guard):
        raise PoleProximityError(float(np.min(distance)), guard)

    return HeisenbergPoint(forward_coords(zeta.coords))

def inverse(a: HeisenbergPoint) -> SpherePoint:
    return SpherePoint(inverse_coords(a.coords), normalize=False)

def jacobian(a: HeisenbergPoint) -> np.ndarray | float:
    value: np.ndarray = jacobian_coords(a.coords)
    return float(value) if value.ndim == 0 else value

def kernel_coords(a: np.ndarray, b: np.ndarray, s: float, p: float) -> np.ndarray:
    n: int = (a.shape[-1] - 1) // 2
    d: np.ndarray = distance_coords(inverse_coords(a), inverse_coords(b))
    return jacobian_coords(a) * jacobian_coords(b) / d ** (2 * n + 2 + s * p)

def kernel(a: HeisenbergPoint, b: HeisenbergPoint, s: float, p: float) -> np.ndarray | float:
    a.check_same_dimension(b)
    if np.any(np.all(a.coords == b.coords, axis=-1)):
        raise SingularEvaluationError("Transported kernel is singular on the diagonal a = b")

    value: np.ndarray = kernel_coords(a.coords, b.coords, s, p)
    return float(value) if value.ndim == 0 else value

def pushforward(u: TestFunction) -> TestFunction:
    """U = u o inverse-Cayley on H^n."""
    if u.domain is not Domain.SPHERE:
        raise ValueError(f"Only sphere functions can be pushed forward: {u.label}")

    return TestFunction(
        evaluator=lambda coords: u.evaluator(inverse_coords(coords)),
        n=u.n,
        label=f"push({u.label})",
        domain=Domain.HEISENBERG,
        is_constant=u.is_constant,
        is_mean_zero=u.is_mean_zero,
        lipschitz_bound=u.lipschitz_bound,
        sup_bound=u.sup_bound,
        smoothness=u.smoothness,
        constraint=u.constraint
        )

def pullback(U: TestFunction, context: CayleyContext | None = None) -> TestFunction:
    """u = U o Cayley on the sphere; pole-adjacent samples evaluate to 0."""
    if U.domain is not Domain.HEISENBERG:
        raise ValueError(f"Only Heisenberg functions can be pulled back: {U.label}")

    guard: float = (context or CayleyContext(U.n)).pole_guard

    def evaluator(coords: np.ndarray) -> np.ndarray:
        near_pole: np.ndarray = pole_distance(coords) < guard
        if np.any(near_pole):
            logger.debug(f"[pullback] - {int(np.count_nonzero(near_pole))} pole-adjacent samples set to 0.")

        safe: np.ndarray = np.where(near_pole[..., None], SpherePoint.north_pole(U.n).coords, coords)
        return np.where(near_pole, 0.0, U.evaluator(forward_coords(safe)))

    return TestFunction(
        evaluator=evaluator,
        n=U.n,
        label=f"pull({U.label})",
        domain=Domain.SPHERE,
        is_constant=False,
        is_mean_zero=U.is_mean_zero,
        lipschitz_bound=U.lipschitz_bound,
        sup_bound=U.sup_bound,
        smoothness=U.smoothness
        )

def sample_weighted_coords(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """
    Exact draws from the probability density J_c / omega on H^n.

    Under that density u = |z|^2 / (1 + |z|^2) is Beta(n, n + 1), the ratio
    t / (1 + |z|^2) is a Student t with 2n + 1 degrees of freedom scaled by
    1 / sqrt(2n + 1), and z / |z| is uniform on the unit sphere of C^n.
    """
    u: np.ndarray = rng.beta(n, n + 1, size=count)
    r_squared: np.ndarray = u / (1.0 - u)
    t: np.ndarray = (1.0 + r_squared) * rng.standard_t(2 * n + 1, size=count) / math.sqrt(2 * n + 1)

    direction: np.ndarray = rng.standard_normal((count, 2 * n))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    return np.concatenate([np.sqrt(r_squared)[:, None] * direction, t[:, None]], axis=1)

def sample_weighted(n: int, count: int, seed: int) -> HeisenbergPoint:
    plan: ChunkPlan = ChunkPlan.create_chunks(count, McConfig.CHUNK)
    blocks: list[np.ndarray] = [sample_weighted_coords(n, chunk.length, chunk_rng(seed, STREAM_HEISENBERG, chunk.index)) for chunk in plan]
    return HeisenbergPoint(np.concatenate(blocks))

def jacobian_integral_mc(n: int, cfg: McConfig) -> Estimate:
    """
    Monte-Carlo value of the integral of J_c over H^n.

    Proposal: |z| = tan(pi U / 2) (half-Cauchy) and t Cauchy with scale
    1 + |z|^2; the importance weights are bounded.
    """
    plan: ChunkPlan = cfg.plan()
    inner_area: float = 2.0 * math.pi**n / math.gamma(n)

    def run_chunk(chunk: Chunk) -> float:
        rng: np.random.Generator = chunk_rng(cfg.seed, STREAM_HEISENBERG, chunk.index)
        r: np.ndarray = np.tan(0.5 * math.pi * rng.uniform(size=chunk.length))
        scale: np.ndarray = 1.0 + r * r
        t: np.ndarray = scale * rng.standard_cauchy(size=chunk.length)

        coords: np.ndarray = np.zeros((chunk.length, 2 * n + 1))
        coords[:, 0] = r
        coords[:, -1] = t
        proposal: np.ndarray = (2.0 / (math.pi * scale)) * (scale / (math.pi * (scale * scale + t * t)))
        weights: np.ndarray = inner_area * r ** (2 * n - 1) * jacobian_coords(coords) / proposal
        return float(np.mean(weights))

    value, std_error = chunked_mean(run_chunk, plan, cfg.threads)
    return Estimate(value, std_error, cfg.samples, 0.0, cfg.seed)
