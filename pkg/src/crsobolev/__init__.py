from .version import __version__

from .settings import LabSettings
from .runner.lab_runner import LabRunner
from .lab.critical_params import CriticalParams
from .estimators.mc_config import McConfig
