"""Penalty ground contact: spring-damper normal force with a Coulomb-capped
viscous tangential force. Ground plane is z = 0; defaults are sized for a
10-50 kg robot (1-5 mm penetration at rest)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ContactParams:
    k_n: float = 1e5  # normal stiffness, N/m
    d_n: float = 1e3  # normal damping, N s/m
    mu: float = 0.8  # friction coefficient
    d_t: float = 1e3  # tangential viscosity, N s/m

    def __post_init__(self):
        for f in ("k_n", "d_n", "mu", "d_t"):
            if getattr(self, f) < 0:
                raise ValueError(f"contact parameter {f} must be >= 0")


def contact_force(pos, vel, params: ContactParams) -> np.ndarray:
    """World-frame force the ground exerts on a point at ``pos`` moving with
    ``vel``. Zero above the plane; normal force clamped at zero (no
    sticking), |F_t| <= mu * f_z always."""
    pos = np.asarray(pos, dtype=float)
    vel = np.asarray(vel, dtype=float)
    z = pos[2]
    if z > 0.0:
        return np.zeros(3)
    delta = -z
    delta_dot = -vel[2]
    fz = max(0.0, params.k_n * delta + params.d_n * delta_dot)
    F = np.array([0.0, 0.0, fz])
    vt = vel[:2]
    speed = float(np.hypot(vt[0], vt[1]))
    if fz > 0.0 and speed >= 1e-9:
        ft = min(params.mu * fz, params.d_t * speed)
        F[:2] = -ft * vt / speed
    return F
