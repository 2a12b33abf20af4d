"""Immutable robot-description types.

A :class:`RobotModel` is the single source of truth every other module
computes from. Joint ordering is depth-first from the root link and frozen
for the model's lifetime; every vector indexed by joint uses that order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

MOVABLE_JOINT_KINDS = ("revolute", "prismatic")
JOINT_KINDS = MOVABLE_JOINT_KINDS + ("fixed",)


def _freeze(a) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SpatialInertia:
    """Mass, center of mass (link frame) and rotational inertia about the CoM."""

    mass: float
    com: np.ndarray
    inertia_rot: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "com", _freeze(self.com))
        object.__setattr__(self, "inertia_rot", _freeze(self.inertia_rot))

    @staticmethod
    def zero() -> "SpatialInertia":
        return SpatialInertia(0.0, np.zeros(3), np.zeros((3, 3)))


@dataclass(frozen=True)
class GeometryPrimitive:
    """Visual primitive: ``box`` (size x,y,z), ``cylinder`` (radius, length)
    or ``sphere`` (radius), posed in the link frame."""

    kind: str
    size: tuple
    xyz: np.ndarray
    rpy: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xyz", _freeze(self.xyz))
        object.__setattr__(self, "rpy", _freeze(self.rpy))


@dataclass(frozen=True)
class Link:
    name: str
    inertia: SpatialInertia
    visuals: tuple = ()


@dataclass(frozen=True)
class JointSpec:
    name: str
    kind: str  # revolute | prismatic | fixed
    axis: np.ndarray  # unit vector, child frame
    origin_xyz: np.ndarray  # parent -> joint translation, m
    origin_rpy: np.ndarray  # parent -> joint rotation, fixed-axis rpy
    parent: str
    child: str
    lower: float = 0.0
    upper: float = 0.0
    effort: float = 0.0
    velocity: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "axis", _freeze(self.axis))
        object.__setattr__(self, "origin_xyz", _freeze(self.origin_xyz))
        object.__setattr__(self, "origin_rpy", _freeze(self.origin_rpy))

    @property
    def movable(self) -> bool:
        return self.kind in MOVABLE_JOINT_KINDS


@dataclass(frozen=True)
class FrameSpec:
    """Named frame rigidly attached to a link (tool points, markers)."""

    name: str
    link: str
    xyz: np.ndarray
    rpy: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xyz", _freeze(self.xyz))
        object.__setattr__(self, "rpy", _freeze(self.rpy))


@dataclass(frozen=True, eq=False)  # identity hash: models are cached by object
class RobotModel:
    name: str
    links: tuple
    joints: tuple
    root_link: str
    floating_base: bool = False
    contact_frames: tuple = ()
    frames: tuple = ()
    warnings: tuple = ()

    @cached_property
    def link_map(self) -> dict:
        return {l.name: l for l in self.links}

    @cached_property
    def joint_map(self) -> dict:
        return {j.name: j for j in self.joints}

    @cached_property
    def movable_joints(self) -> tuple:
        return tuple(j for j in self.joints if j.movable)

    @cached_property
    def joint_names(self) -> tuple:
        """Depth-first non-fixed joint order; the canonical q indexing."""
        return tuple(j.name for j in self.movable_joints)

    @property
    def nq(self) -> int:
        return len(self.movable_joints)

    @property
    def nv(self) -> int:
        """Generalized-velocity dimension ([base_lin; base_ang; joints])."""
        return self.nq + (6 if self.floating_base else 0)

    @cached_property
    def position_limits(self) -> tuple:
        lo = _freeze([j.lower for j in self.movable_joints])
        hi = _freeze([j.upper for j in self.movable_joints])
        return lo, hi

    @cached_property
    def effort_limits(self) -> np.ndarray:
        return _freeze([j.effort for j in self.movable_joints])

    @cached_property
    def velocity_limits(self) -> np.ndarray:
        return _freeze([j.velocity for j in self.movable_joints])

    @cached_property
    def frame_names(self) -> tuple:
        return tuple(l.name for l in self.links) + tuple(f.name for f in self.frames)

    @cached_property
    def total_mass(self) -> float:
        return float(sum(l.inertia.mass for l in self.links))


@dataclass(frozen=True)
class GainsConfig:
    """Per-joint PID gains and the home configuration, in model joint order."""

    joint_names: tuple
    kp: np.ndarray
    kd: np.ndarray
    ki: np.ndarray
    q_home: np.ndarray
    homing_duration: float

    def __post_init__(self):
        for f in ("kp", "kd", "ki", "q_home"):
            object.__setattr__(self, f, _freeze(getattr(self, f)))


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # error | warning
    element: str
    message: str
