import pytest

from crsobolev.enums import Experiment, InequalityForm
from crsobolev.exceptions import ConfigurationError, UnknownExperimentError
from crsobolev.runner.run_config import DEFAULT_OPTIONS, RunConfig
from crsobolev.settings import LabSettings

def test_from_settings_applies_defaults() -> None:
    config: RunConfig = RunConfig.from_settings("admissibility", LabSettings(threads=1))

    assert config.experiment is Experiment.ADMISSIBILITY
    assert config.params.Q == 4
    assert config.options == DEFAULT_OPTIONS[Experiment.ADMISSIBILITY]
    assert config.options["form"] == InequalityForm.LINEAR.value

def test_experiment_fields_override_defaults() -> None:
    config: RunConfig = RunConfig.from_settings("admissibility", LabSettings(experiment={"budget": 7, "form": "power"}))
    assert config.options["budget"] == 7
    assert config.options["form"] == "power"

def test_unknown_experiment() -> None:
    with pytest.raises(UnknownExperimentError) as info:
        RunConfig.from_settings("nonsense", LabSettings())

    assert not isinstance(info.value, ConfigurationError)
    assert "thresholds" in info.value.known

@pytest.mark.parametrize("experiment, settings", [
    ("thresholds", LabSettings(s=1.5)),
    ("thresholds", LabSettings(p=10.0)),
    ("thresholds", LabSettings(samples=0)),
    ("thresholds", LabSettings(experiment={"budget": 3})),
    ("admissibility", LabSettings(experiment={"form": "cubic"})),
    ("admissibility", LabSettings(experiment={"budget": 0})),
    ("subcritical", LabSettings(experiment={"side": "moon"})),
    ("constraints", LabSettings(experiment={"constraint": "odd"})),
    ("scan-endpoint", LabSettings(experiment={"eps_list": []}))
    ])
def test_invalid_settings_raise_configuration_error(experiment: str, settings: LabSettings) -> None:
    with pytest.raises(ConfigurationError):
        RunConfig.from_settings(experiment, settings)

def test_canonical_form_leaves_out_threads_and_paths() -> None:
    config: RunConfig = RunConfig.from_settings("thresholds", LabSettings(threads=3, output_dir="somewhere"))
    canonical: dict = config.canonical()

    assert "threads" not in canonical["mc"]
    assert "somewhere" not in str(canonical)
    assert canonical["experiment"] == "thresholds"

def test_config_hash() -> None:
    one: RunConfig = RunConfig.from_settings("thresholds", LabSettings(threads=1))
    four: RunConfig = RunConfig.from_settings("thresholds", LabSettings(threads=4))
    reseeded: RunConfig = RunConfig.from_settings("thresholds", LabSettings(seed=1))

    assert one.config_hash == four.config_hash
    assert one.config_hash != reseeded.config_hash
