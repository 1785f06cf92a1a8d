"""
Pair proposals on the sphere.

With w = <eta, xi> and 1 - w = rho * exp(i phi), a uniform eta gives w the
density (n / pi) (1 - |w|^2)^(n-1) on the unit disk and d(xi, eta)^2 = 2 rho.
Tilting by d^(-beta) factorizes: (1 + sin phi) / 2 is Beta((a+1)/2, (a+1)/2)
with a = 2n - beta/2, and rho / (2 cos phi) is Beta(n + 1 - beta/2, n).
"""
import math

import numpy as np
from scipy import special

def distance_moment(n: int, exponent: float) -> float:
    """E[d(xi, eta)^exponent] for independent uniform xi, eta; finite iff exponent > -Q."""
    beta: float = -exponent
    if beta >= 2 * n + 2:
        raise ValueError(f"Distance moment diverges for exponent {exponent} (Q={2 * n + 2})")

    a: float = 2 * n - beta / 2
    log_value: float = (
        math.log(n / math.pi)
        - 0.5 * beta * math.log(2.0)
        + a * math.log(2.0)
        + special.betaln(n + 1 - beta / 2, n)
        + 0.5 * math.log(math.pi)
        + special.gammaln((a + 1) / 2)
        - special.gammaln(a / 2 + 1)
        )
    return math.exp(log_value)

def proposal_normalizer(n: int, beta: float) -> float:
    return distance_moment(n, -beta)

def mixture_density_ratio(d: np.ndarray, beta: float, normalizer: float) -> np.ndarray:
    """Density of the half-uniform, half-tilted mixture relative to the uniform law."""
    if beta == 0:
        return np.ones_like(d)

    with np.errstate(divide="ignore", over="ignore"):
        return 0.5 + 0.5 * d ** (-beta) / normalizer

def near_diagonal_coords(xi: np.ndarray, beta: float, rng: np.random.Generator) -> np.ndarray:
    """Draw eta with density proportional to d(xi, eta)^(-beta) around each xi."""
    count: int = xi.shape[0]
    half: int = xi.shape[-1] // 2
    n: int = half - 1

    a: float = 2 * n - beta / 2
    sin_phi: np.ndarray = 2.0 * rng.beta((a + 1) / 2, (a + 1) / 2, size=count) - 1.0
    cos_phi: np.ndarray = np.sqrt(np.maximum(1.0 - sin_phi**2, 0.0))
    rho: np.ndarray = 2.0 * cos_phi * rng.beta(n + 1 - beta / 2, n, size=count)
    w: np.ndarray = 1.0 - rho * (cos_phi + 1j * sin_phi)

    xi_complex: np.ndarray = xi[:, :half] + 1j * xi[:, half:]
    gauss: np.ndarray = rng.standard_normal((count, half)) + 1j * rng.standard_normal((count, half))
    overlap: np.ndarray = np.sum(gauss * np.conj(xi_complex), axis=1)
    orthogonal: np.ndarray = gauss - overlap[:, None] * xi_complex
    orthogonal /= np.linalg.norm(orthogonal, axis=1, keepdims=True)

    radial: np.ndarray = np.sqrt(np.maximum(1.0 - np.abs(w) ** 2, 0.0))
    eta: np.ndarray = w[:, None] * xi_complex + radial[:, None] * orthogonal
    return np.concatenate([eta.real, eta.imag], axis=1)

def mixture_coords(xi: np.ndarray, beta: float, rng: np.random.Generator) -> np.ndarray:
    """Partner points from the equal mixture of uniform and near-diagonal proposals."""
    count, dim = xi.shape
    uniform: np.ndarray = rng.standard_normal((count, dim))
    uniform /= np.linalg.norm(uniform, axis=1, keepdims=True)
    if beta == 0:
        return uniform

    tilted: np.ndarray = near_diagonal_coords(xi, beta, rng)
    use_tilted: np.ndarray = rng.uniform(size=count) < 0.5
    return np.where(use_tilted[:, None], tilted, uniform)
