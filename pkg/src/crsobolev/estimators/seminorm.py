import logging
import math

import numpy as np
from scipy import integrate, special

from ..enums import Domain, Side
from ..exceptions import ConfigurationError, QuadratureError
from ..functions.test_function import TestFunction
from ..geometry.cayley import (
    CayleyContext,
    forward_coords,
    inverse_coords,
    jacobian_coords,
    kernel_coords,
    pole_distance,
    pushforward,
    sample_weighted_coords
    )
from ..geometry.sphere import distance_coords, uniform_coords, volume

from .chunks import STREAM_PAIRS, STREAM_PAIRS_HEISENBERG, Chunk, ChunkPlan, chunk_rng, chunked_mean
from .mc_config import Estimate, McConfig
from .sampling import distance_moment, mixture_coords, mixture_density_ratio, proposal_normalizer

logger: logging.Logger = logging.getLogger(__name__)

def check_exponents(s: float, p: float) -> None:
    if not 0 < s < 1:
        raise ValueError(f"Smoothness s must lie in (0, 1): {s}")
    if not p > 1:
        raise ValueError(f"Integrability p must exceed 1: {p}")

def tail_bound(lipschitz: float, n: int, s: float, p: float, cutoff: float) -> float:
    """
    Upper bound on the seminorm mass of pairs with d < cutoff for an
    L-Lipschitz function: L^p omega^2 n cutoff^(p(1-s)) / (2p(1-s)).
    """
    if cutoff <= 0:
        return 0.0

    omega: float = volume(n).omega
    gap: float = p * (1.0 - s)
    return lipschitz**p * omega**2 * n * cutoff**gap / (2.0 * gap)

def kernel_mass(n: int, s: float, p: float) -> float:
    """sup over eta of the integral of d(xi, eta)^-(Q - (1-s)p) dV(xi); independent of eta."""
    return volume(n).omega * distance_moment(n, -(2 * n + 2 - (1.0 - s) * p))

def kernel_mass_mc(n: int, s: float, p: float, cfg: McConfig) -> Estimate:
    """Mixture-sampled value of the kernel mass around the north pole."""
    exponent: float = 2 * n + 2 - (1.0 - s) * p
    beta: float = cfg.beta(n)
    normalizer: float = proposal_normalizer(n, beta)
    omega: float = volume(n).omega
    plan: ChunkPlan = cfg.plan()

    pole: np.ndarray = np.zeros(2 * n + 2)
    pole[n] = 1.0

    def run_chunk(chunk: Chunk) -> float:
        rng: np.random.Generator = chunk_rng(cfg.seed, STREAM_PAIRS, chunk.index)
        centers: np.ndarray = np.broadcast_to(pole, (chunk.length, 2 * n + 2))
        xi: np.ndarray = mixture_coords(np.ascontiguousarray(centers), beta, rng)
        d: np.ndarray = distance_coords(xi, centers)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values: np.ndarray = d ** (-exponent) / mixture_density_ratio(d, beta, normalizer)
        return float(np.mean(np.where(d > 0, values, 0.0)))

    value, std_error = chunked_mean(run_chunk, plan, cfg.threads)
    return Estimate(omega * value, omega * std_error, cfg.samples, 0.0, cfg.seed)

def _sphere_chunk(u: TestFunction, s: float, p: float, beta: float, normalizer: float, cutoff: float, seed: int, chunk: Chunk) -> float:
    n: int = u.n
    rng: np.random.Generator = chunk_rng(seed, STREAM_PAIRS, chunk.index)
    xi: np.ndarray = uniform_coords(n, chunk.length, rng)
    eta: np.ndarray = mixture_coords(xi, beta, rng)

    d: np.ndarray = distance_coords(xi, eta)
    difference: np.ndarray = np.abs(u(xi) - u(eta)) ** p
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values: np.ndarray = difference * d ** (-(2 * n + 2 + s * p)) / mixture_density_ratio(d, beta, normalizer)

    keep: np.ndarray = (d > cutoff) if cutoff > 0 else (d > 0)
    return float(np.mean(np.where(keep & np.isfinite(values), values, 0.0)))

def _weighted_chunk(U: TestFunction, s: float, p: float, beta: float, normalizer: float, cutoff: float, seed: int, guard: float, chunk: Chunk) -> float:
    """
    One chunk of the transported seminorm on H^n.

    a is drawn from J_c / omega; b is the Cayley image of a mixture partner
    of the preimage of a, so its Lebesgue density on H^n is
    J_c(b) / omega times the mixture ratio.
    """
    n: int = U.n
    omega: float = volume(n).omega
    rng: np.random.Generator = chunk_rng(seed, STREAM_PAIRS_HEISENBERG, chunk.index)
    a: np.ndarray = sample_weighted_coords(n, chunk.length, rng)
    eta: np.ndarray = mixture_coords(inverse_coords(a), beta, rng)

    near_pole: np.ndarray = pole_distance(eta) < guard
    if np.any(near_pole):
        logger.debug(f"[gagliardo] - Chunk {chunk.index}: {int(np.count_nonzero(near_pole))} pole-adjacent partners dropped.")
        eta = np.where(near_pole[:, None], inverse_coords(a), eta)

    b: np.ndarray = forward_coords(eta)
    d: np.ndarray = distance_coords(inverse_coords(a), inverse_coords(b))
    difference: np.ndarray = np.abs(U(a) - U(b)) ** p
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        density: np.ndarray = (jacobian_coords(a) / omega) * (jacobian_coords(b) / omega) * mixture_density_ratio(d, beta, normalizer)
        values: np.ndarray = difference * kernel_coords(a, b, s, p) / density

    keep: np.ndarray = ((d > cutoff) if cutoff > 0 else (d > 0)) & ~near_pole
    return float(np.mean(np.where(keep & np.isfinite(values), values, 0.0)))

def gagliardo(u: TestFunction, s: float, p: float, side: Side = Side.SPHERE, cfg: McConfig | None = None, context: CayleyContext | None = None) -> Estimate:
    """
    Estimate of [u]_{s,p}^p, or of the transported [U]_{K_c,p}^p on H^n.

    Pairs are (xi, eta) with xi uniform and eta from an equal mixture of the
    uniform law and a proposal proportional to d(xi, eta)^(-beta).
    """
    check_exponents(s, p)
    cfg = cfg or McConfig()
    n: int = u.n

    cutoff: float = cfg.diagonal_cutoff
    if cutoff > 0 and u.lipschitz_bound is None:
        raise ConfigurationError(f"Diagonal cutoff {cutoff!r} needs a Lipschitz bound for {u.label}")

    bound: float = tail_bound(u.lipschitz_bound or 0.0, n, s, p, cutoff)
    if u.is_constant:
        return Estimate(0.0, 0.0, cfg.samples, 0.0, cfg.seed)

    beta: float = cfg.beta(n)
    normalizer: float = proposal_normalizer(n, beta)
    omega: float = volume(n).omega
    plan: ChunkPlan = cfg.plan()

    match side:
        case Side.SPHERE:
            if u.domain is not Domain.SPHERE:
                raise ValueError(f"Sphere seminorm needs a sphere function: {u.label}")

            def run_chunk(chunk: Chunk) -> float:
                return _sphere_chunk(u, s, p, beta, normalizer, cutoff, cfg.seed, chunk)

            scale: float = omega**2
        case Side.WEIGHTED_HEISENBERG:
            U: TestFunction = pushforward(u) if u.domain is Domain.SPHERE else u
            guard: float = (context or CayleyContext(n)).pole_guard

            def run_chunk(chunk: Chunk) -> float:
                return _weighted_chunk(U, s, p, beta, normalizer, cutoff, cfg.seed, guard, chunk)

            scale = 1.0
        case _:
            raise ValueError(f"Unsupported seminorm side: {side}")

    value, std_error = chunked_mean(run_chunk, plan, cfg.threads)
    estimate: Estimate = Estimate(scale * value, scale * std_error, cfg.samples, bound, cfg.seed)
    logger.debug(f"[gagliardo] - {u.label}, s={s!r}, p={p!r}, {side.value}: {estimate.value!r} +/- {estimate.std_error!r} (tail {bound!r}).")
    return estimate

def coordinate_seminorm_exact(n: int, s: float) -> float:
    """Closed form of [Re w_1]_{s,2}^2 for the fixed CR distance."""
    if not 0 < s < 1:
        raise ValueError(f"Smoothness s must lie in (0, 1): {s}")

    omega: float = volume(n).omega
    gamma: float = 2 * n + 2 + 2 * s
    b: float = n + 1 - s
    moment: float = (
        (n / math.pi)
        * 2.0 ** (b - gamma / 2)
        * special.beta(1 - s, n)
        * math.sqrt(math.pi) * special.gamma((b + 1) / 2) / special.gamma(b / 2 + 1)
        )
    return omega**2 * moment / (2 * n + 2)

def coordinate_seminorm_quadrature(n: int, s: float, tolerance: float = 1e-8) -> float:
    """
    Deterministic quadrature of [Re w_1]_{s,2}^2 on the reduced (rho, phi) variables.

    The rho integral carries the algebraic endpoint weights explicitly.
    """
    if not 0 < s < 1:
        raise ValueError(f"Smoothness s must lie in (0, 1): {s}")

    omega: float = volume(n).omega
    gamma: float = 2 * n + 2 + 2 * s

    def inner(phi: float) -> float:
        top: float = 2.0 * math.cos(phi)
        if top <= 0:
            return 0.0

        # rho^(-s) (top - rho)^(n-1) times the smooth factor 2 cos(phi).
        value, error = integrate.quad(lambda rho: 2.0 * math.cos(phi), 0.0, top, weight="alg", wvar=(-s, n - 1), epsabs=tolerance)
        return value

    outer, error = integrate.quad(inner, -math.pi / 2, math.pi / 2, epsabs=tolerance, limit=200)
    if error > tolerance * max(1.0, abs(outer)):
        raise QuadratureError(error, tolerance, what="coordinate seminorm")

    moment: float = (n / math.pi) * 2.0 ** (-gamma / 2) * outer
    return omega**2 * moment / (2 * n + 2)
