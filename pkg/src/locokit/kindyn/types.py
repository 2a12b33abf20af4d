"""State types for kinematics/dynamics.

Generalized-velocity convention (n_v): ``[base_lin; base_ang; joints]`` for
floating-base models, joints only for fixed base. Base linear/angular
velocity are world-frame; base orientation is fixed-axis roll-pitch-yaw.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..transforms import RigidTransform


def _freeze(a):
    arr = np.asarray(a, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Configuration:
    base_pos: np.ndarray
    base_rpy: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base_pos", _freeze(self.base_pos))
        object.__setattr__(self, "base_rpy", _freeze(self.base_rpy))
        object.__setattr__(self, "q", _freeze(self.q))

    @staticmethod
    def fixed(q) -> "Configuration":
        return Configuration(np.zeros(3), np.zeros(3), q)

    @staticmethod
    def floating(base_pos, base_rpy, q) -> "Configuration":
        return Configuration(base_pos, base_rpy, q)


@dataclass(frozen=True)
class Velocity:
    base_lin: np.ndarray
    base_ang: np.ndarray
    qd: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base_lin", _freeze(self.base_lin))
        object.__setattr__(self, "base_ang", _freeze(self.base_ang))
        object.__setattr__(self, "qd", _freeze(self.qd))

    @staticmethod
    def zero(model) -> "Velocity":
        return Velocity(np.zeros(3), np.zeros(3), np.zeros(model.nq))

    @staticmethod
    def fixed(qd) -> "Velocity":
        return Velocity(np.zeros(3), np.zeros(3), qd)

    def as_vector(self, floating: bool) -> np.ndarray:
        if floating:
            return np.concatenate([self.base_lin, self.base_ang, self.qd])
        return np.array(self.qd)


@dataclass
class KinDynSnapshot:
    """Everything one kinematics refresh produces, mutually consistent.

    ``gr_forces`` is left empty here; the high-level controller fills it
    from its ground-reaction estimator.
    """

    t: float
    frame_poses: dict  # name -> RigidTransform, world
    com: np.ndarray
    vcom: np.ndarray
    mass_matrix: np.ndarray
    nle: np.ndarray
    gravity_vec: np.ndarray
    contact_positions: dict  # contact frame -> 3-vector
    contact_jacobians: dict  # contact frame -> (3, n_v)
    centroidal_inertia: np.ndarray  # 6x6, [linear; angular] blocks
    centroidal_momentum: np.ndarray  # [linear momentum; angular about CoM]
    gr_forces: dict


__all__ = ["Configuration", "Velocity", "KinDynSnapshot", "RigidTransform"]
