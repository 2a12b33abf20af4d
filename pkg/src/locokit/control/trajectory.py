"""Minimum-jerk joint-space time law."""
from __future__ import annotations

import numpy as np

from ..errors import NonPositiveDuration


def quintic_trajectory(q0, qf, duration, t):
    """Fifth-order polynomial from q0 to qf with zero boundary velocity and
    acceleration, clamped outside [0, duration].

    Returns (q_des, qd_des, qdd_des).
    """
    if duration <= 0:
        raise NonPositiveDuration(f"duration {duration} must be > 0")
    q0 = np.asarray(q0, dtype=float)
    qf = np.asarray(qf, dtype=float)
    u = min(max(t / duration, 0.0), 1.0)
    s = 10.0 * u**3 - 15.0 * u**4 + 6.0 * u**5
    sd = (30.0 * u**2 - 60.0 * u**3 + 30.0 * u**4) / duration
    sdd = (60.0 * u - 180.0 * u**2 + 120.0 * u**3) / duration**2
    delta = qf - q0
    return q0 + delta * s, delta * sd, delta * sdd
