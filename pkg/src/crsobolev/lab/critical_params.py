from typing import Any, Self

from ..geometry.group_params import GroupParams

class CriticalParams:
    """Critical exponents for a fractional Sobolev pair (s, p) on S^(2n+1)."""
    def __init__(self: Self, n: int, s: float, p: float) -> None:
        group: GroupParams = GroupParams(n)
        if not 0 < s < 1:
            raise ValueError(f"Smoothness s must lie in (0, 1): {s}")
        if not 1 < p < group.Q:
            raise ValueError(f"Integrability p must lie in (1, Q={group.Q}): {p}")
        if not s * p < group.Q:
            raise ValueError(f"Product s*p must be below Q={group.Q}: {s * p}")

        self.n = n
        self.s = float(s)
        self.p = float(p)
        self.Q: int = group.Q

    @property
    def p_star(self: Self) -> float:
        return self.Q * self.p / (self.Q - self.s * self.p)

    @property
    def q(self: Self) -> float:
        return self.p_star

    @property
    def alpha(self: Self) -> float:
        return self.p / self.p_star

    def to_dict(self: Self) -> dict[str, Any]:
        return {"n": self.n, "s": self.s, "p": self.p, "Q": self.Q, "p_star": self.p_star, "alpha": self.alpha}

    def __eq__(self: Self, other: object) -> bool:
        return isinstance(other, CriticalParams) and (self.n, self.s, self.p) == (other.n, other.s, other.p)

    def __hash__(self: Self) -> int:
        return hash((self.n, self.s, self.p))

    def __repr__(self: Self) -> str:
        return (
            f"CriticalParams("
            f"n={self.n}, "
            f"s={self.s}, "
            f"p={self.p}, "
            f"p_star={self.p_star:.6g})"
            )
