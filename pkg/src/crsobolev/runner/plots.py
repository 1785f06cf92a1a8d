import io
import logging
import math
from typing import NamedTuple

import matplotlib

matplotlib.use("Agg")

from matplotlib import pyplot as plt

from ..report import ExperimentReport

logger: logging.Logger = logging.getLogger(__name__)

# Fixed salt and no date keep the SVG output byte-identical across runs.
SVG_HASHSALT: str = "crsobolev"

class CurveSpec(NamedTuple):
    name: str
    x: str
    ys: tuple[str, ...]
    xlabel: str
    ylabel: str
    log_x: bool = False

def render_svg(report: ExperimentReport, spec: CurveSpec) -> bytes:
    """Static SVG of ``spec.ys`` against ``spec.x`` over the report rows."""
    # Rows with a non-finite coordinate (an unbounded A_min, say) are not drawn.
    rows = [
        row for row in report.rows
        if spec.x in row and all(isinstance(row.get(column), (int, float)) and math.isfinite(row[column]) for column in (spec.x, *spec.ys))
        ]
    if not rows:
        raise ValueError(f"Report {report.name} has no rows with column {spec.x!r}")

    with matplotlib.rc_context({"svg.hashsalt": SVG_HASHSALT, "svg.fonttype": "none"}):
        figure, axes = plt.subplots(figsize=(6.0, 4.0))
        try:
            xs: list[float] = [float(row[spec.x]) for row in rows]
            for column in spec.ys:
                ys: list[float] = [float(row[column]) for row in rows]
                axes.plot(xs, ys, marker="o", label=column)

            if spec.log_x:
                axes.set_xscale("log")
            axes.set_xlabel(spec.xlabel)
            axes.set_ylabel(spec.ylabel)
            axes.set_title(report.name)
            axes.legend()
            axes.grid(True, alpha=0.3)

            buffer: io.BytesIO = io.BytesIO()
            figure.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(figure)

    logger.debug(f"[render_svg] - {spec.name}: {len(rows)} points.")
    return buffer.getvalue()
