from typing import Self

import numpy as np
from numpy.typing import ArrayLike

from ..exceptions import DimensionMismatchError

class HeisenbergPoint:
    """
    Point (or batch of points) of H^n stored as flat reals ``(x_1..x_n, y_1..y_n, t)``.

    Leading axes of ``coords`` are batch axes; every operation on points
    vectorizes over them.
    """
    def __init__(self: Self, coords: ArrayLike) -> None:
        coords = np.asarray(coords, dtype=float)
        if coords.ndim == 0 or coords.shape[-1] < 3 or coords.shape[-1] % 2 == 0:
            raise ValueError(f"Heisenberg coordinates must have odd length 2n+1 >= 3: {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise ValueError("Heisenberg coordinates must be finite")

        self.coords: np.ndarray = coords

    @classmethod
    def from_parts(cls: type[Self], x: ArrayLike, y: ArrayLike, t: ArrayLike) -> Self:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        t = np.asarray(t, dtype=float)
        if x.shape != y.shape:
            raise ValueError(f"x and y must share a shape: {x.shape} != {y.shape}")

        return cls(np.concatenate([x, y, t[..., None]], axis=-1))

    @classmethod
    def from_complex(cls: type[Self], z: ArrayLike, t: ArrayLike) -> Self:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return cls.from_parts(z.real, z.imag, t)

    @classmethod
    def identity(cls: type[Self], n: int) -> Self:
        return cls(np.zeros(2 * n + 1))

    @property
    def n(self: Self) -> int:
        return (self.coords.shape[-1] - 1) // 2

    @property
    def batch_shape(self: Self) -> tuple[int, ...]:
        return self.coords.shape[:-1]

    @property
    def x(self: Self) -> np.ndarray:
        return self.coords[..., :self.n]

    @property
    def y(self: Self) -> np.ndarray:
        return self.coords[..., self.n:2 * self.n]

    @property
    def t(self: Self) -> np.ndarray:
        return self.coords[..., -1]

    @property
    def z(self: Self) -> np.ndarray:
        return self.x + 1j * self.y

    @property
    def z_norm_squared(self: Self) -> np.ndarray:
        return np.sum(self.x**2 + self.y**2, axis=-1)

    def check_same_dimension(self: Self, other: Self) -> None:
        if self.n != other.n:
            raise DimensionMismatchError(self.n, other.n, what="Heisenberg point")

    def __len__(self: Self) -> int:
        if not self.batch_shape:
            raise TypeError("A single Heisenberg point has no length")

        return self.batch_shape[0]

    def __getitem__(self: Self, index: int | slice | np.ndarray) -> Self:
        if not self.batch_shape:
            raise TypeError("A single Heisenberg point is not indexable")

        return type(self)(self.coords[index])

    def __eq__(self: Self, other: object) -> bool:
        return isinstance(other, HeisenbergPoint) and np.array_equal(self.coords, other.coords)

    def __repr__(self: Self) -> str:
        if self.batch_shape:
            return f"HeisenbergPoint(n={self.n}, batch={self.batch_shape})"

        return f"HeisenbergPoint(z={self.z.tolist()}, t={float(self.t)})"
