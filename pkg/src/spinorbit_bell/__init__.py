"""Spin-orbit Bell measurement simulator on a truncated multimode Fock space."""

from .apparatus import ChshSettings, DEFAULT_CHSH_SETTINGS, Settings
from .errors import ConfigError, SimulationError, TruncationError
from .fock import BasisConfig, ModeIndex, OneBodyOperator, PureState, StateEnsemble
from .partitions import BellModeLabel
from .states import Family, StateSpec

__all__ = [
    "BasisConfig",
    "BellModeLabel",
    "ChshSettings",
    "ConfigError",
    "DEFAULT_CHSH_SETTINGS",
    "Family",
    "ModeIndex",
    "OneBodyOperator",
    "PureState",
    "Settings",
    "SimulationError",
    "StateEnsemble",
    "StateSpec",
    "TruncationError",
]

__version__ = "0.1.0"
