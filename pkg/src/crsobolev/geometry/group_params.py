from typing import Self

class GroupParams:
    def __init__(self: Self, n: int) -> None:
        if int(n) != n or n < 1:
            raise ValueError(f"Complex dimension must be a positive integer: {n}")

        self.n = int(n)

    @property
    def Q(self: Self) -> int:
        return 2 * self.n + 2

    @property
    def real_dimension(self: Self) -> int:
        return 2 * self.n + 1

    def __eq__(self: Self, other: object) -> bool:
        return isinstance(other, GroupParams) and self.n == other.n

    def __hash__(self: Self) -> int:
        return hash(self.n)

    def __repr__(self: Self) -> str:
        return f"GroupParams(n={self.n}, Q={self.Q})"
