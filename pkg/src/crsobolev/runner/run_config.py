from typing import Any, NamedTuple, Self

from ..enums import ConstraintClass, Experiment, InequalityForm, Side
from ..estimators.mc_config import McConfig
from ..exceptions import ConfigurationError, UnknownExperimentError
from ..lab.critical_params import CriticalParams
from ..lab.endpoint import DEFAULT_EPS
from ..settings import LabSettings
from ..utils import generate_config_hash

# Experiment fields and their defaults; None means "derived at run time".
DEFAULT_OPTIONS: dict[Experiment, dict[str, Any]] = {
    Experiment.VOLUME: {"radii": [0.5, 1.0, 2.0], "triangle_triples": 10**5},
    Experiment.VERIFY_CAYLEY: {"exponents": [2.0], "A": 1.0, "B_factors": [0.5, 2.0]},
    Experiment.SEMINORM: {"cutoff": 0.05, "homogeneity_factor": 1.7, "shift": 0.8},
    Experiment.THRESHOLDS: {"offset": 0.01},
    Experiment.SCAN_ENDPOINT: {"eps_list": list(DEFAULT_EPS)},
    Experiment.SCALAR_LEMMAS: {"trials": 10**5, "scalar_seed": 0},
    Experiment.POINCARE: {"radius": 1.0, "local_samples": 8192},
    Experiment.ADMISSIBILITY: {"B_grid": None, "form": InequalityForm.LINEAR.value, "budget": 200, "bumps": 3},
    Experiment.SUBCRITICAL: {"r": None, "eps": 0.5, "A0": None, "form": InequalityForm.LINEAR.value, "side": Side.SPHERE.value},
    Experiment.CONSTRAINTS: {"constraint": ConstraintClass.ZERO_AVERAGE.value, "budget": 200, "bumps": 3, "B_values": [-1.0, 0.0, 1.0]},
    Experiment.REPORT: {}
    }

class RunConfig(NamedTuple):
    """Validated view of the settings for one experiment."""
    experiment: Experiment
    params: CriticalParams
    mc: McConfig
    options: dict[str, Any]
    output_dir: str
    cache: bool
    debug: bool
    version: int = LabSettings.VERSION

    @classmethod
    def from_settings(cls: type[Self], experiment: str, settings: LabSettings) -> Self:
        try:
            name: Experiment = Experiment(experiment)
        except ValueError:
            raise UnknownExperimentError(experiment, [member.value for member in Experiment]) from None

        try:
            params: CriticalParams = CriticalParams(int(settings.get_var("n")), float(settings.get_var("s")), float(settings.get_var("p")))
            mc: McConfig = McConfig(
                samples=int(settings.get_var("samples")),
                seed=int(settings.get_var("seed")),
                chunk=int(settings.get_var("chunk")),
                importance_exponent=settings.get_var("importance_exponent"),
                diagonal_cutoff=float(settings.get_var("diagonal_cutoff")),
                threads=int(settings.get_var("threads"))
                )
            mc.beta(params.n)
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid parameters: {e}") from None

        defaults: dict[str, Any] = DEFAULT_OPTIONS[name]
        unknown: list[str] = [key for key in settings.experiment if key not in defaults]
        if unknown:
            raise ConfigurationError(f"Unknown fields for experiment {name.value!r}: {', '.join(sorted(unknown))}")

        options: dict[str, Any] = {**defaults, **settings.experiment}
        cls._check_options(name, options)

        return cls(
            experiment=name,
            params=params,
            mc=mc,
            options=options,
            output_dir=str(settings.get_var("output_dir")),
            cache=bool(settings.get_var("cache")),
            debug=bool(settings.get_var("debug")),
            version=int(settings.get_var("version"))
            )

    @staticmethod
    def _check_options(name: Experiment, options: dict[str, Any]) -> None:
        try:
            if "form" in options:
                InequalityForm(options["form"])
            if "side" in options:
                Side(options["side"])
            if "constraint" in options:
                ConstraintClass(options["constraint"])
        except ValueError as e:
            raise ConfigurationError(f"Invalid option for {name.value!r}: {e}") from None

        if "budget" in options and int(options["budget"]) < 1:
            raise ConfigurationError(f"Budget must be positive: {options['budget']!r}")
        if "eps_list" in options and not options["eps_list"]:
            raise ConfigurationError("eps_list must not be empty")

    def canonical(self: Self) -> dict[str, Any]:
        """Plain dictionary that identifies the run; thread count and output paths are left out."""
        mc: dict[str, Any] = self.mc.to_dict()
        del mc["threads"]
        return {
            "version": self.version,
            "experiment": self.experiment.value,
            "params": {"n": self.params.n, "s": self.params.s, "p": self.params.p},
            "mc": mc,
            "options": self.options
            }

    @property
    def config_hash(self: Self) -> str:
        return generate_config_hash(self.canonical())
