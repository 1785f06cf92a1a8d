from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
import logging
import math
from typing import NamedTuple, Self, TypeVar

import numpy as np

logger: logging.Logger = logging.getLogger(__name__)

T = TypeVar("T")

# Stream tags keep the substreams of different consumers of one seed apart.
STREAM_SPHERE: int = 1
STREAM_HEISENBERG: int = 2
STREAM_BALL: int = 3
STREAM_PAIRS: int = 4
STREAM_PAIRS_HEISENBERG: int = 5
STREAM_SUITE: int = 6
STREAM_OPTIMIZER: int = 7
STREAM_SCALAR: int = 8
STREAM_PROJECTION: int = 9

def chunk_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream), int(index)]))

class Chunk(NamedTuple):
    index: int
    begin: int
    length: int

class ChunkPlan:
    def __init__(self: Self, chunks: list[Chunk], total: int) -> None:
        self.chunks = chunks
        self.total = total

    @classmethod
    def create_chunks(cls: type[Self], total: int, chunk_length: int) -> Self:
        if total < 1:
            raise ValueError(f"Total sample count must be at least 1: {total}")
        if chunk_length < 1:
            raise ValueError(f"Chunk length must be at least 1: {chunk_length}")

        total_chunks: int = math.ceil(total / chunk_length)
        last_chunk_length: int = total - (total_chunks - 1) * chunk_length

        chunks: list[Chunk] = [
            Chunk(
                index=i,
                begin=i * chunk_length,
                length=last_chunk_length if i == total_chunks - 1 else chunk_length
                ) for i in range(total_chunks)
            ]
        return cls(chunks, total)

    @property
    def sizes(self: Self) -> np.ndarray:
        return np.array([chunk.length for chunk in self.chunks], dtype=float)

    def __len__(self: Self) -> int:
        return len(self.chunks)

    def __iter__(self: Self):
        return iter(self.chunks)

    def __repr__(self: Self) -> str:
        return f"ChunkPlan(total={self.total}, chunks={len(self.chunks)})"

def map_chunks(fn: Callable[[Chunk], T], plan: Iterable[Chunk], threads: int = 1) -> list[T]:
    # Results come back in chunk order whatever the thread count.
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(fn, plan))

    return [fn(chunk) for chunk in plan]

def batch_means(means: np.ndarray, sizes: np.ndarray) -> tuple[float, float]:
    means = np.asarray(means, dtype=float)
    sizes = np.asarray(sizes, dtype=float)

    total: float = float(sizes.sum())
    weights: np.ndarray = sizes / total
    value: float = float(np.dot(weights, means))

    chunks: int = len(means)
    if chunks < 2:
        return value, 0.0

    variance: float = float(np.sum(weights**2 * (means - value) ** 2)) * chunks / (chunks - 1)
    return value, math.sqrt(variance)

def chunked_mean(run_chunk: Callable[[Chunk], float], plan: ChunkPlan, threads: int = 1) -> tuple[float, float]:
    means: list[float] = map_chunks(run_chunk, plan, threads)
    return batch_means(np.array(means), plan.sizes)
