"""
Command-line entry point.

    crsobolev <experiment> [flags]

Exit codes: 0 when every verdict passes, 2 when any verdict is a failure
(FAIL, VIOLATED, NO-GAP or INCONCLUSIVE), 1 on a usage or configuration
error, 3 on a numerical failure.
"""
import argparse
import asyncio
import sys
from typing import Any, NoReturn, Sequence

from ..enums import ConstraintClass, Experiment, InequalityForm, Side
from ..exceptions import ConfigurationError, CRSobolevError, DegenerateInputError, QuadratureError, RangeError, SingularEvaluationError
from ..settings import LabSettings
from ..utils import format_number, parse_float_list
from ..version import __version__

from .lab_runner import LabRunner

EXIT_OK: int = 0
EXIT_USAGE: int = 1
EXIT_VERDICT: int = 2
EXIT_NUMERIC: int = 3

NUMERIC_ERRORS: tuple[type[Exception], ...] = (QuadratureError, DegenerateInputError, SingularEvaluationError, RangeError)

# Flag destinations that map one to one onto LabSettings variables.
SETTINGS_FLAGS: tuple[str, ...] = (
    "n", "s", "p", "samples", "seed", "chunk", "importance_exponent", "diagonal_cutoff", "threads", "output_dir"
    )

class LabArgumentParser(argparse.ArgumentParser):
    """Raises instead of exiting, so usage errors share exit code 1 with bad configs."""
    def error(self, message: str) -> NoReturn:
        raise ConfigurationError(message)

def build_parser() -> LabArgumentParser:
    parser: LabArgumentParser = LabArgumentParser(
        prog="crsobolev",
        description="Numerical laboratory for critical fractional Sobolev inequalities on the CR sphere and the Heisenberg group."
        )
    parser.add_argument("experiment", choices=[member.value for member in Experiment], help="Experiment to run; 'report' summarizes the output directory.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON config file; flags override its fields.")

    params = parser.add_argument_group("parameters")
    params.add_argument("--n", type=int, help="Sphere S^{2n+1} / Heisenberg group H^n dimension index.")
    params.add_argument("--s", type=float, help="Fractional order in (0, 1).")
    params.add_argument("--p", type=float, help="Integrability exponent in (1, Q).")

    mc = parser.add_argument_group("monte carlo")
    mc.add_argument("--samples", type=int, help="Total sample count.")
    mc.add_argument("--seed", type=int, help="Base seed of the chunked random streams.")
    mc.add_argument("--chunk", type=int, help="Samples per chunk.")
    mc.add_argument("--importance-exponent", type=float, help="Near-diagonal proposal exponent beta; 0 samples pairs uniformly.")
    mc.add_argument("--diagonal-cutoff", type=float, help="Drop pairs closer than this distance and add the analytic tail bound.")
    mc.add_argument("--threads", type=int, help="Worker threads (fallback: $CRSOBOLEV_THREADS, then the CPU count).")

    experiment = parser.add_argument_group("experiment")
    experiment.add_argument("--B", type=parse_float_list, help="Lower-order coefficient(s).")
    experiment.add_argument("--B-grid", type=parse_float_list, help="Grid of B values for the admissibility scan.")
    experiment.add_argument("--A0", type=float, help="Leading constant for the subcritical check.")
    experiment.add_argument("--eps", type=parse_float_list, help="Perturbation sizes (scan-endpoint) or the single epsilon (subcritical).")
    experiment.add_argument("--r", type=float, help="Subcritical exponent in [p, p*).")
    experiment.add_argument("--form", choices=[member.value for member in InequalityForm])
    experiment.add_argument("--budget", type=int, help="Total objective evaluations across optimizer restarts.")
    experiment.add_argument("--constraint", choices=[member.value for member in ConstraintClass])
    experiment.add_argument("--side", choices=[member.value for member in Side])
    experiment.add_argument("--trials", type=int, help="Random trials for the scalar inequalities.")
    experiment.add_argument("--radius", type=float, help="Ball radius for the local Poincare check.")

    output = parser.add_argument_group("output")
    output.add_argument("--output-dir", help="Directory for reports, data and curves.")
    output.add_argument("--no-cache", action="store_true", help="Always recompute and do not store cached artifacts.")
    output.add_argument("--debug", action="store_true", help="Verbose logging.")

    return parser

def experiment_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Experiment fields given on the command line, keyed as in the config file."""
    name: Experiment = Experiment(args.experiment)
    overrides: dict[str, Any] = {}

    if args.B is not None:
        match name:
            case Experiment.CONSTRAINTS:
                overrides["B_values"] = args.B
            case Experiment.ADMISSIBILITY:
                overrides["B_grid"] = args.B
            case _:
                raise ConfigurationError(f"--B does not apply to {name.value!r}")

    if args.eps is not None:
        match name:
            case Experiment.SCAN_ENDPOINT:
                overrides["eps_list"] = args.eps
            case Experiment.SUBCRITICAL if len(args.eps) == 1:
                overrides["eps"] = args.eps[0]
            case Experiment.SUBCRITICAL:
                raise ConfigurationError(f"subcritical takes a single --eps: {args.eps!r}")
            case _:
                raise ConfigurationError(f"--eps does not apply to {name.value!r}")

    for flag, field in (("B_grid", "B_grid"), ("A0", "A0"), ("r", "r"), ("form", "form"), ("budget", "budget"), ("constraint", "constraint"), ("side", "side"), ("trials", "trials"), ("radius", "radius")):
        if (value := getattr(args, flag)) is not None:
            overrides[field] = value

    return overrides

async def load_settings(args: argparse.Namespace) -> LabSettings:
    settings: LabSettings = LabSettings.from_env()
    if args.config is not None:
        settings = await LabSettings.from_file(args.config, settings)

    for name in SETTINGS_FLAGS:
        if (value := getattr(args, name)) is not None:
            settings.set_var(name, value)

    if args.no_cache:
        settings.set_var("cache", False)
    if args.debug:
        settings.set_var("debug", True)

    settings.experiment.update(experiment_overrides(args))
    return settings

def _number(value: float | str) -> str:
    # Non-finite values arrive as strings from the JSON report.
    return value if isinstance(value, str) else format_number(value)

def print_document(document: dict[str, Any]) -> None:
    if "experiments" in document:
        for row in document["experiments"]:
            print(f"{row['experiment']}: {row['overall']} ({row['failures']}/{row['verdicts']} failing)")
    else:
        for quantity in document.get("quantities", []):
            if quantity["std_error"]:
                print(f"{quantity['name']} = {_number(quantity['value'])} ± {_number(quantity['std_error'])} [{quantity['provenance']}]")
            else:
                print(f"{quantity['name']} = {_number(quantity['value'])} [{quantity['provenance']}]")

        for key, verdict in document.get("verdicts", {}).items():
            print(f"{key}: {verdict}")

        for note in document.get("notes", []):
            print(f"note: {note}")

    print(f"overall: {document['overall']}")

async def run(argv: Sequence[str] | None = None) -> int:
    args: argparse.Namespace = build_parser().parse_args(argv)
    settings: LabSettings = await load_settings(args)

    runner: LabRunner = await LabRunner.initialize(args.experiment, settings)
    document: dict[str, Any] = await runner.run()
    print_document(document)

    return EXIT_VERDICT if document["overall"] == "FAIL" else EXIT_OK

def main(argv: Sequence[str] | None = None) -> int:
    try:
        return asyncio.run(run(argv))
    except NUMERIC_ERRORS as e:
        print(f"crsobolev: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (CRSobolevError, ValueError, OSError) as e:
        print(f"crsobolev: error: {e}", file=sys.stderr)
        return EXIT_USAGE
