import asyncio
import logging
from typing import Any, Self

from ..enums import Experiment
from ..settings import LabSettings

from .artifacts import ArtifactStore, write_summary
from .experiments import ExperimentResult, run_experiment
from .plots import render_svg
from .run_config import RunConfig

class LabRunner:
    def __init__(
        self: Self,
        config: RunConfig,
        store: ArtifactStore
        ) -> None:
        self.config = config
        self.store = store

        self.debug: bool = config.debug
        self.logger: logging.Logger = self.initialize_logger(self.debug)

    @classmethod
    async def initialize(cls: type[Self], experiment: str, settings: LabSettings) -> Self:
        config: RunConfig = RunConfig.from_settings(experiment, settings)
        return cls(
            config=config,
            store=ArtifactStore(config.output_dir, config.experiment.value, config.config_hash)
            )

    def initialize_logger(self: Self, debug: bool) -> logging.Logger:
        logger = logging.getLogger("crsobolev")
        logger.setLevel(logging.DEBUG if debug else logging.INFO)

        if not logger.handlers:
            stream_handler: logging.StreamHandler = logging.StreamHandler()
            formatter = logging.Formatter("[%(asctime)s] - %(levelname)s - %(name)s - %(message)s", datefmt="%d/%m/%y %H:%M:%S")
            stream_handler.setFormatter(formatter)

            logger.addHandler(stream_handler)

        logger.info(f"Logger has been initialized. [DEBUG: {debug}]")
        return logger

    def render_curves(self: Self, result: ExperimentResult) -> dict[str, bytes]:
        svgs: dict[str, bytes] = {}
        for spec in result.curves:
            try:
                svgs[spec.name] = render_svg(result.report, spec)
            except ValueError as e:
                self.logger.warning(f"[{self.config.experiment.value}] - Skipped curve {spec.name}: {e}")

        return svgs

    async def run(self: Self) -> dict[str, Any]:
        """Run the experiment, or restore it from the cache, and return its report document."""
        config: RunConfig = self.config
        if config.experiment is Experiment.REPORT:
            return await write_summary(config.output_dir)

        if config.cache and self.store.has_cached():
            return await self.store.restore_cached()

        result: ExperimentResult = await asyncio.to_thread(run_experiment, config)
        svgs: dict[str, bytes] = await asyncio.to_thread(self.render_curves, result)
        await self.store.write(result.report, config.canonical(), svgs, config.cache)

        return self.store.report_document(result.report, config.canonical())

    def __repr__(self: Self) -> str:
        return (
            f"LabRunner("
            f"experiment={self.config.experiment.value}, "
            f"config_hash={self.config.config_hash[:12]}, "
            f"output_dir={self.config.output_dir})"
            )
