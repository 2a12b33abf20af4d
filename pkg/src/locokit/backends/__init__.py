from .base import Backend
from .contact import ContactParams, contact_force
from .mock import MockHardwareBackend, make_mock_hw_backend
from .sim import SimBackend, SimState, make_sim_backend, point_kinematics, sim_step
from .world import WorldConfig, load_world, world_from_dict

__all__ = [
    "Backend",
    "ContactParams",
    "MockHardwareBackend",
    "SimBackend",
    "SimState",
    "WorldConfig",
    "contact_force",
    "load_world",
    "make_mock_hw_backend",
    "make_sim_backend",
    "point_kinematics",
    "sim_step",
    "world_from_dict",
]
