from .backend import backend_name
from .ops import (
    DEFAULT_GRAVITY,
    centroidal,
    com_state,
    euler_rate_map,
    forward_dynamics,
    forward_kinematics,
    frame_jacobian,
    frame_pose,
    gravity_terms,
    mass_matrix,
    nonlinear_effects,
    rnea,
    update_kinematics,
)
from .types import Configuration, KinDynSnapshot, Velocity

__all__ = [
    "DEFAULT_GRAVITY",
    "Configuration",
    "KinDynSnapshot",
    "Velocity",
    "backend_name",
    "centroidal",
    "com_state",
    "euler_rate_map",
    "forward_dynamics",
    "forward_kinematics",
    "frame_jacobian",
    "frame_pose",
    "gravity_terms",
    "mass_matrix",
    "nonlinear_effects",
    "rnea",
    "update_kinematics",
]
