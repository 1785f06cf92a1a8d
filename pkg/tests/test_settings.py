import asyncio
import json
from pathlib import Path

import pytest

from crsobolev.exceptions import ConfigurationError
from crsobolev.settings import LabSettings

def test_defaults() -> None:
    settings: LabSettings = LabSettings()
    assert (settings.n, settings.s, settings.p) == (1, 0.5, 2.0)
    assert settings.samples == 65536
    assert settings.version == LabSettings.VERSION
    assert settings.experiment == {}

def test_threads_from_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(LabSettings.THREADS_ENV, "3")
    assert LabSettings.from_env().threads == 3

def test_threads_from_env_must_be_an_integer(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(LabSettings.THREADS_ENV, "many")
    with pytest.raises(ConfigurationError):
        LabSettings.from_env()

def test_from_dict_overrides_and_merges_experiment_fields() -> None:
    base: LabSettings = LabSettings(experiment={"budget": 10})
    settings: LabSettings = LabSettings.from_dict({"n": 2, "seed": 5, "experiment": {"form": "power"}}, base)

    assert settings.n == 2
    assert settings.seed == 5
    assert settings.experiment == {"budget": 10, "form": "power"}

@pytest.mark.parametrize("data", [
    {"version": 2},
    {"unknown_key": 1},
    {"experiment": [1, 2]}
    ])
def test_from_dict_rejects_bad_fields(data: dict) -> None:
    with pytest.raises(ConfigurationError):
        LabSettings.from_dict(data, LabSettings())

def test_get_and_set_var() -> None:
    settings: LabSettings = LabSettings()
    settings.set_var("samples", 1024)
    assert settings.get_var("samples") == 1024
    assert settings.to_dict()["samples"] == 1024

    with pytest.raises(ConfigurationError):
        settings.get_var("nope")

def test_from_file(tmp_path: Path) -> None:
    path: Path = tmp_path / "config.json"
    path.write_text(json.dumps({"version": 1, "s": 0.25, "experiment": {"offset": 0.1}}))

    settings: LabSettings = asyncio.run(LabSettings.from_file(str(path), LabSettings()))
    assert settings.s == 0.25
    assert settings.experiment == {"offset": 0.1}

@pytest.mark.parametrize("content", [None, "{not json", "[1, 2]"])
def test_from_file_rejects_missing_or_malformed_files(tmp_path: Path, content: str | None) -> None:
    path: Path = tmp_path / "config.json"
    if content is not None:
        path.write_text(content)

    with pytest.raises(ConfigurationError):
        asyncio.run(LabSettings.from_file(str(path), LabSettings()))
