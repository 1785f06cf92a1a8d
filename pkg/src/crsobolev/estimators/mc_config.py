import math
from typing import Any, NamedTuple, Self

from .chunks import ChunkPlan

class Estimate(NamedTuple):
    value: float
    std_error: float = 0.0
    samples: int = 0
    tail_bound: float = 0.0
    seed: int | None = None

    @classmethod
    def exact(cls: type[Self], value: float, samples: int = 0, seed: int | None = None) -> Self:
        return cls(float(value), 0.0, samples, 0.0, seed)

    def scaled(self, factor: float) -> Self:
        return self._replace(
            value=self.value * factor,
            std_error=self.std_error * abs(factor),
            tail_bound=self.tail_bound * abs(factor)
            )

    def power(self, exponent: float) -> Self:
        # Delta method; a zero base has zero error.
        if self.value <= 0:
            return self._replace(value=max(self.value, 0.0) ** exponent, std_error=0.0)

        value: float = self.value ** exponent
        return self._replace(value=value, std_error=abs(exponent) * value / self.value * self.std_error)

    @property
    def upper(self) -> float:
        return self.value + self.tail_bound

def combined_error(*errors: float) -> float:
    return math.sqrt(sum(error**2 for error in errors))

class McConfig:
    SAMPLES: int = 1 << 16
    SEED: int = 20240607
    CHUNK: int = 2048
    DIAGONAL_CUTOFF: float = 0.0
    THREADS: int = 1

    def __init__(
        self: Self,
        samples: int = SAMPLES,
        seed: int = SEED,
        chunk: int = CHUNK,
        importance_exponent: float | None = None,
        diagonal_cutoff: float = DIAGONAL_CUTOFF,
        threads: int = THREADS
        ) -> None:
        if samples < 1:
            raise ValueError(f"Sample count must be at least 1: {samples}")
        if chunk < 1:
            raise ValueError(f"Chunk length must be at least 1: {chunk}")
        if importance_exponent is not None and importance_exponent < 0:
            raise ValueError(f"Importance exponent must be nonnegative: {importance_exponent}")
        if diagonal_cutoff < 0:
            raise ValueError(f"Diagonal cutoff must be nonnegative: {diagonal_cutoff}")
        if threads < 1:
            raise ValueError(f"Thread count must be at least 1: {threads}")

        self.samples = int(samples)
        self.seed = int(seed)
        self.chunk = int(chunk)
        self.importance_exponent = importance_exponent
        self.diagonal_cutoff = float(diagonal_cutoff)
        self.threads = int(threads)

    def beta(self: Self, n: int) -> float:
        """Pair-proposal exponent for dimension ``n``; defaults to ``Q - 1``."""
        Q: int = 2 * n + 2
        beta: float = float(Q - 1) if self.importance_exponent is None else float(self.importance_exponent)
        if beta >= Q:
            raise ValueError(f"Importance exponent must be below Q={Q}: {beta}")

        return beta

    def plan(self: Self, samples: int | None = None) -> ChunkPlan:
        return ChunkPlan.create_chunks(self.samples if samples is None else samples, self.chunk)

    def replace(self: Self, **changes: Any) -> Self:
        fields: dict[str, Any] = self.to_dict()
        fields.update(changes)
        return type(self)(**fields)

    def to_dict(self: Self) -> dict[str, Any]:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "chunk": self.chunk,
            "importance_exponent": self.importance_exponent,
            "diagonal_cutoff": self.diagonal_cutoff,
            "threads": self.threads
            }

    def __eq__(self: Self, other: object) -> bool:
        return isinstance(other, McConfig) and self.to_dict() == other.to_dict()

    def __hash__(self: Self) -> int:
        return hash(tuple(self.to_dict().items()))

    def __repr__(self: Self) -> str:
        return (
            f"McConfig("
            f"samples={self.samples}, "
            f"seed={self.seed}, "
            f"chunk={self.chunk}, "
            f"importance_exponent={self.importance_exponent}, "
            f"diagonal_cutoff={self.diagonal_cutoff}, "
            f"threads={self.threads})"
            )
