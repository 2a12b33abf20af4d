from .core import ControllerCore, FixtureRegistry, load_model_and_publishers
from .ik import ik_position
from .logbuf import LogBuffer, export_csv
from .trajectory import quintic_trajectory

__all__ = [
    "ControllerCore",
    "FixtureRegistry",
    "LogBuffer",
    "export_csv",
    "ik_position",
    "load_model_and_publishers",
    "quintic_trajectory",
]
