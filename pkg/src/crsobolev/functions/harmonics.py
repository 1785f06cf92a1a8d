from itertools import combinations_with_replacement
import math
from typing import Self

from ..exceptions import RangeError

# Dimensions are reported as signed 64-bit integers.
MAX_DIMENSION: int = 2**63 - 1

class HarmonicIndex:
    def __init__(self: Self, j: int, k: int) -> None:
        if j < 0 or k < 0:
            raise ValueError(f"Harmonic bidegree must be nonnegative: ({j}, {k})")

        self.j = int(j)
        self.k = int(k)

    def __iter__(self: Self):
        return iter((self.j, self.k))

    def __eq__(self: Self, other: object) -> bool:
        return isinstance(other, HarmonicIndex) and (self.j, self.k) == (other.j, other.k)

    def __hash__(self: Self) -> int:
        return hash((self.j, self.k))

    def __repr__(self: Self) -> str:
        return f"HarmonicIndex(j={self.j}, k={self.k})"

def dim_harmonic(idx: HarmonicIndex, n: int) -> int:
    """Dimension of the space of harmonics of bidegree (j, k) on S^(2n+1)."""
    if n < 1:
        raise ValueError(f"Complex dimension must be at least 1: {n}")

    j, k = idx
    numerator: int = math.factorial(j + n - 1) * math.factorial(k + n - 1) * (j + k + n)
    denominator: int = math.factorial(n) * math.factorial(n - 1) * math.factorial(j) * math.factorial(k)
    dimension, remainder = divmod(numerator, denominator)
    if remainder:
        raise ArithmeticError(f"Non-integral harmonic dimension for {idx}, n={n}")
    if dimension > MAX_DIMENSION:
        raise RangeError(f"Harmonic dimension for {idx}, n={n} exceeds 64-bit range")

    return dimension

def count_monomials(degree: int, variables: int) -> int:
    if degree < 0:
        return 0

    return sum(1 for _ in combinations_with_replacement(range(variables), degree))

def dim_polynomials(j: int, k: int, n: int) -> int:
    """Monomials z^a conj(z)^b with |a| = j, |b| = k in n+1 variables, by enumeration."""
    return count_monomials(j, n + 1) * count_monomials(k, n + 1)

def dim_harmonic_bruteforce(idx: HarmonicIndex, n: int) -> int:
    j, k = idx
    return dim_polynomials(j, k, n) - dim_polynomials(j - 1, k - 1, n)
