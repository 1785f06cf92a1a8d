import json
import os
from typing import Any, Self

import aiofiles

from .exceptions import ConfigurationError

class LabSettings:
    """
    Variable store for one lab run.

    Values come from the class defaults, then the environment, then a JSON
    config file, then command-line flags; later sources win.
    """
    VERSION: int = 1

    N: int = 1
    S: float = 0.5
    P: float = 2.0

    SAMPLES: int = 1 << 16
    SEED: int = 20240607
    CHUNK: int = 2048
    IMPORTANCE_EXPONENT: float | None = None
    DIAGONAL_CUTOFF: float = 0.0

    OUTPUT_DIR: str = "results"
    CACHE: bool = True
    THREADS: int = os.cpu_count() or 1
    DEBUG: bool = False

    THREADS_ENV: str = "CRSOBOLEV_THREADS"

    def __init__(
        self: Self,
        version: int = VERSION,
        n: int = N,
        s: float = S,
        p: float = P,
        samples: int = SAMPLES,
        seed: int = SEED,
        chunk: int = CHUNK,
        importance_exponent: float | None = IMPORTANCE_EXPONENT,
        diagonal_cutoff: float = DIAGONAL_CUTOFF,
        experiment: dict[str, Any] | None = None,
        output_dir: str = OUTPUT_DIR,
        cache: bool = CACHE,
        threads: int = THREADS,
        debug: bool = DEBUG
        ) -> None:
        self.version = version
        self.n = n
        self.s = s
        self.p = p
        self.samples = samples
        self.seed = seed
        self.chunk = chunk
        self.importance_exponent = importance_exponent
        self.diagonal_cutoff = diagonal_cutoff
        self.experiment: dict[str, Any] = dict(experiment or {})
        self.output_dir = output_dir
        self.cache = cache
        self.threads = threads
        self.debug = debug

    @classmethod
    def from_env(cls: type[Self]) -> Self:
        settings: Self = cls()
        if (threads := os.environ.get(cls.THREADS_ENV)) is not None:
            try:
                settings.set_var("threads", int(threads))
            except ValueError:
                raise ConfigurationError(f"{cls.THREADS_ENV} must be an integer: {threads!r}") from None

        return settings

    @classmethod
    def from_dict(cls: type[Self], data: dict[str, Any], base: Self | None = None) -> Self:
        settings: Self = base if base is not None else cls.from_env()
        for name, value in data.items():
            if name == "experiment":
                if not isinstance(value, dict):
                    raise ConfigurationError(f"Config field 'experiment' must be an object: {value!r}")

                settings.experiment.update(value)
            else:
                settings.set_var(name, value)

        if settings.version != cls.VERSION:
            raise ConfigurationError(f"Unsupported config version: {settings.version!r} (expected: {cls.VERSION})")

        return settings

    @classmethod
    async def from_file(cls: type[Self], path: str, base: Self | None = None) -> Self:
        try:
            async with aiofiles.open(path, mode="r", encoding="utf-8") as file:
                data: Any = json.loads(await file.read())
        except FileNotFoundError:
            raise ConfigurationError(f"Config file not found: {path}") from None
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Malformed config file {path}: {e}") from None

        if not isinstance(data, dict):
            raise ConfigurationError(f"Config file {path} must hold a JSON object")

        return cls.from_dict(data, base)

    def get_var(self: Self, name: str) -> Any:
        if name not in vars(self):
            raise ConfigurationError(f"Unknown setting: {name!r}")

        return getattr(self, name)

    def set_var(self: Self, name: str, value: Any) -> None:
        if name not in vars(self):
            raise ConfigurationError(f"Unknown setting: {name!r}")

        setattr(self, name, value)

    def to_dict(self: Self) -> dict[str, Any]:
        return dict(vars(self))

    def __repr__(self: Self) -> str:
        return f"LabSettings(n={self.n}, s={self.s}, p={self.p}, samples={self.samples}, seed={self.seed})"
