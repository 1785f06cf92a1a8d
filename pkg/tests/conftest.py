import pytest

from crsobolev.estimators.mc_config import McConfig
from crsobolev.lab.critical_params import CriticalParams

@pytest.fixture
def cfg() -> McConfig:
    return McConfig(samples=1 << 14, seed=11, chunk=1024, threads=1)

@pytest.fixture
def params() -> CriticalParams:
    return CriticalParams(1, 0.5, 2.0)
