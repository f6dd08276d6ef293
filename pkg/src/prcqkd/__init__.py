"""Key rates of continuous-variable MDI-QKD with an imperfect phase
reference calibration between two free-running lasers."""

from .analysis import SweepSpec, max_distance, optimize_vm, sweep, tolerance_v_laser
from .errors import BracketError, ConfigError, InfeasibleError, NumericalDomainError, PrcError
from .keyrate import KeyRateResult, secret_key_rate
from .params import ScenarioKind, SystemParams, build_scenario, validate

__all__ = [
    "BracketError",
    "ConfigError",
    "InfeasibleError",
    "KeyRateResult",
    "NumericalDomainError",
    "PrcError",
    "ScenarioKind",
    "SweepSpec",
    "SystemParams",
    "build_scenario",
    "max_distance",
    "optimize_vm",
    "secret_key_rate",
    "sweep",
    "tolerance_v_laser",
    "validate",
]
