"""Small 3D rotation/transform helpers used across the framework.

Orientation convention everywhere: fixed-axis roll-pitch-yaw, i.e.
``R = Rz(yaw) @ Ry(pitch) @ Rx(roll)``, matching the ``rpy`` attribute of
robot description files. Angular quantities are world-frame unless noted.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def skew(v) -> np.ndarray:
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def rpy_to_matrix(rpy) -> np.ndarray:
    r, p, y = rpy
    cr, sr = np.cos(r), np.sin(r)
    cp, sp = np.cos(p), np.sin(p)
    cy, sy = np.cos(y), np.sin(y)
    return np.array(
        [
            [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
            [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
            [-sp, cp * sr, cp * cr],
        ]
    )


def matrix_to_rpy(R) -> np.ndarray:
    """Inverse of :func:`rpy_to_matrix`; pitch folded into [-pi/2, pi/2]."""
    pitch = np.arctan2(-R[2, 0], np.hypot(R[0, 0], R[1, 0]))
    if abs(np.cos(pitch)) < 1e-12:
        # Gimbal lock: roll/yaw indistinguishable, pick roll = 0.
        yaw = np.arctan2(-R[0, 1], R[1, 1])
        return np.array([0.0, pitch, yaw])
    roll = np.arctan2(R[2, 1], R[2, 2])
    yaw = np.arctan2(R[1, 0], R[0, 0])
    return np.array([roll, pitch, yaw])


def rotation_about_axis(axis, angle) -> np.ndarray:
    """Rodrigues rotation about a unit axis."""
    a = np.asarray(axis, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    K = skew(a)
    return c * np.eye(3) + s * K + (1.0 - c) * np.outer(a, a)


def wrap_angle(theta):
    """Wrap into (-pi, pi]."""
    wrapped = np.mod(-np.asarray(theta, dtype=float) + np.pi, 2.0 * np.pi)
    return -(wrapped - np.pi)


@dataclass(frozen=True)
class RigidTransform:
    """World-frame pose: rotation matrix + translation."""

    rot: np.ndarray
    pos: np.ndarray

    @staticmethod
    def identity() -> "RigidTransform":
        return RigidTransform(np.eye(3), np.zeros(3))

    @staticmethod
    def from_rpy(xyz, rpy) -> "RigidTransform":
        return RigidTransform(rpy_to_matrix(rpy), np.asarray(xyz, dtype=float))

    def compose(self, other: "RigidTransform") -> "RigidTransform":
        return RigidTransform(self.rot @ other.rot, self.pos + self.rot @ other.pos)

    def inverse(self) -> "RigidTransform":
        rt = self.rot.T
        return RigidTransform(rt, -rt @ self.pos)

    def apply(self, point) -> np.ndarray:
        return self.rot @ np.asarray(point, dtype=float) + self.pos

    @property
    def rpy(self) -> np.ndarray:
        return matrix_to_rpy(self.rot)
