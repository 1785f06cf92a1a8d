import asyncio
import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Self

import aiofiles

from ..enums import Verdict
from ..report import ExperimentReport

logger: logging.Logger = logging.getLogger(__name__)

REPORT_FILE: str = "report.json"
DATA_FILE: str = "data.csv"
SUMMARY_JSON: str = "summary.json"
SUMMARY_CSV: str = "summary.csv"
CACHE_DIR: str = "cache"

def _cell(value: Any) -> str:
    match value:
        case bool():
            return str(value).lower()
        case float() if not math.isfinite(value):
            return str(value)
        case float():
            return repr(value)
        case None:
            return ""
        case _:
            return str(value)

def render_csv(columns: list[str], rows: list[dict[str, Any]]) -> str:
    buffer: io.StringIO = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in columns])

    return buffer.getvalue()

def render_json(data: dict[str, Any]) -> str:
    return json.dumps(data, indent=2, sort_keys=True, default=str) + "\n"

async def write_file(path: Path, content: str | bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    mode: str = "wb" if isinstance(content, bytes) else "w"
    async with aiofiles.open(path, mode=mode) as file:
        await file.write(content)

async def read_file(path: Path) -> bytes:
    async with aiofiles.open(path, mode="rb") as file:
        return await file.read()

class ArtifactStore:
    """
    Output files of one experiment run under ``output_dir/<experiment>/``,
    mirrored to ``output_dir/cache/<config hash>/``.
    """
    def __init__(self: Self, output_dir: str, experiment: str, config_hash: str) -> None:
        self.output_dir = Path(output_dir)
        self.experiment = experiment
        self.config_hash = config_hash

    @property
    def experiment_dir(self: Self) -> Path:
        return self.output_dir / self.experiment

    @property
    def cache_dir(self: Self) -> Path:
        return self.output_dir / CACHE_DIR / self.config_hash

    def has_cached(self: Self) -> bool:
        return (self.cache_dir / REPORT_FILE).is_file()

    async def restore_cached(self: Self) -> dict[str, Any]:
        """Copy cached artifacts into the experiment directory and return the cached report."""
        names: list[str] = sorted(path.name for path in self.cache_dir.iterdir() if path.is_file())
        contents: list[bytes] = await asyncio.gather(*(read_file(self.cache_dir / name) for name in names))
        await asyncio.gather(*(write_file(self.experiment_dir / name, content) for name, content in zip(names, contents)))

        logger.info(f"[{self.experiment}] - Cache hit {self.config_hash[:12]}: restored {len(names)} artifacts.")
        return json.loads(contents[names.index(REPORT_FILE)])

    def report_document(self: Self, report: ExperimentReport, config: dict[str, Any]) -> dict[str, Any]:
        return {**report.to_dict(), "config": config, "config_hash": self.config_hash}

    async def write(self: Self, report: ExperimentReport, config: dict[str, Any], svgs: dict[str, bytes] | None = None, cache: bool = True) -> list[Path]:
        files: dict[str, str | bytes] = {REPORT_FILE: render_json(self.report_document(report, config))}
        if report.rows:
            files[DATA_FILE] = render_csv(report.columns, report.rows)
        for name, svg in (svgs or {}).items():
            files[f"{name}.svg"] = svg

        targets: list[Path] = [self.experiment_dir]
        if cache:
            targets.append(self.cache_dir)

        paths: list[Path] = [target / name for target in targets for name in files]
        await asyncio.gather(*(write_file(path, files[path.name]) for path in paths))

        logger.info(f"[{self.experiment}] - Wrote {len(files)} artifacts to {self.experiment_dir}.")
        return paths

async def write_summary(output_dir: str) -> dict[str, Any]:
    """Collect every experiment report under ``output_dir`` into summary files."""
    root: Path = Path(output_dir)
    report_paths: list[Path] = sorted(
        path for path in root.glob(f"*/{REPORT_FILE}")
        if path.parent.name != CACHE_DIR
        )
    documents: list[dict[str, Any]] = [json.loads(content) for content in await asyncio.gather(*(read_file(path) for path in report_paths))]

    rows: list[dict[str, Any]] = []
    for path, document in zip(report_paths, documents):
        verdicts: dict[str, str] = document.get("verdicts", {})
        rows.append({
            "experiment": path.parent.name,
            "name": document.get("name"),
            "overall": document.get("overall"),
            "verdicts": len(verdicts),
            "failures": sum(Verdict(verdict).is_failure for verdict in verdicts.values()),
            "config_hash": document.get("config_hash")
            })

    summary: dict[str, Any] = {
        "experiments": rows,
        "overall": "FAIL" if any(row["overall"] == "FAIL" for row in rows) else "PASS"
        }
    await asyncio.gather(
        write_file(root / SUMMARY_JSON, render_json(summary)),
        write_file(root / SUMMARY_CSV, render_csv(["experiment", "name", "overall", "verdicts", "failures", "config_hash"], rows))
        )

    logger.info(f"[report] - Summarized {len(rows)} experiment reports in {root}.")
    return summary
