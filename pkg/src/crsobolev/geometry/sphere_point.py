from typing import Self

import numpy as np
from numpy.typing import ArrayLike

from ..exceptions import DegenerateInputError, DimensionMismatchError

class SpherePoint:
    """
    Unit vector (or batch of unit vectors) in C^(n+1).

    Stored as 2n+2 reals ordered ``(Re w_1..Re w_(n+1), Im w_1..Im w_(n+1))``
    and renormalized on construction.
    """
    def __init__(self: Self, coords: ArrayLike, normalize: bool = True) -> None:
        coords = np.array(coords, dtype=float)
        if coords.ndim == 0 or coords.shape[-1] < 4 or coords.shape[-1] % 2 == 1:
            raise ValueError(f"Sphere coordinates must have even length 2n+2 >= 4: {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise ValueError("Sphere coordinates must be finite")

        if normalize:
            norms: np.ndarray = np.linalg.norm(coords, axis=-1, keepdims=True)
            if np.any(norms == 0):
                raise DegenerateInputError("The zero vector has no direction on the sphere")

            coords /= norms

        self.coords: np.ndarray = coords

    @classmethod
    def from_complex(cls: type[Self], w: ArrayLike) -> Self:
        w = np.asarray(w, dtype=complex)
        return cls(np.concatenate([w.real, w.imag], axis=-1))

    @classmethod
    def north_pole(cls: type[Self], n: int) -> Self:
        coords: np.ndarray = np.zeros(2 * n + 2)
        coords[n] = 1.0
        return cls(coords)

    @classmethod
    def south_pole(cls: type[Self], n: int) -> Self:
        coords: np.ndarray = np.zeros(2 * n + 2)
        coords[n] = -1.0
        return cls(coords)

    @property
    def n(self: Self) -> int:
        return self.coords.shape[-1] // 2 - 1

    @property
    def batch_shape(self: Self) -> tuple[int, ...]:
        return self.coords.shape[:-1]

    @property
    def w(self: Self) -> np.ndarray:
        half: int = self.n + 1
        return self.coords[..., :half] + 1j * self.coords[..., half:]

    def coordinate(self: Self, i: int) -> np.ndarray:
        return self.coords[..., i - 1]

    def check_same_dimension(self: Self, other: Self) -> None:
        if self.n != other.n:
            raise DimensionMismatchError(self.n, other.n, what="sphere point")

    def __neg__(self: Self) -> Self:
        return type(self)(-self.coords, normalize=False)

    def __len__(self: Self) -> int:
        if not self.batch_shape:
            raise TypeError("A single sphere point has no length")

        return self.batch_shape[0]

    def __getitem__(self: Self, index: int | slice | np.ndarray) -> Self:
        if not self.batch_shape:
            raise TypeError("A single sphere point is not indexable")

        return type(self)(self.coords[index], normalize=False)

    def __eq__(self: Self, other: object) -> bool:
        return isinstance(other, SpherePoint) and np.array_equal(self.coords, other.coords)

    def __repr__(self: Self) -> str:
        if self.batch_shape:
            return f"SpherePoint(n={self.n}, batch={self.batch_shape})"

        return f"SpherePoint(w={self.w.tolist()})"
