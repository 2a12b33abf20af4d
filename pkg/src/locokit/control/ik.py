"""Position inverse kinematics by damped least squares.

3-DoF position task only; orientation tasks are out of scope. Joint limits
are enforced by clamping every iterate. The returned solution is always
verified against forward kinematics, never trusted.
"""
from __future__ import annotations

import numpy as np

from ..errors import NoConvergence, Unreachable
from ..kindyn import Configuration, forward_kinematics, frame_jacobian

UNREACHABLE_RESIDUAL = 1e-3
STEP_CLAMP = 0.2  # task-space error clamp per iteration, m


def ik_position(model, target, frame, seed, tolerance=1e-6, max_iters=200,
                damping=1e-3):
    """Solve FK(q)[frame] == target for q (fixed-base models).

    Damped-least-squares iteration
    ``dq = J^T (J J^T + damping^2 I)^(-1) e`` with the task error clamped to
    ``STEP_CLAMP`` per iteration for far targets.

    Raises :class:`Unreachable` when the best residual stays above 1 mm and
    :class:`NoConvergence` when iterations run out closer than that.
    """
    target = np.asarray(target, dtype=float)
    lo, hi = model.position_limits
    q = np.clip(np.asarray(seed, dtype=float), lo, hi)
    best_q, best_res = q, np.inf
    lam2 = damping * damping

    for _ in range(max_iters + 1):
        pos = forward_kinematics(model, Configuration.fixed(q))[frame].pos
        e = target - pos
        res = float(np.linalg.norm(e))
        if res < best_res:
            best_q, best_res = q, res
        if res < tolerance:
            return q
        norm = np.linalg.norm(e)
        if norm > STEP_CLAMP:
            e = e * (STEP_CLAMP / norm)
        J = frame_jacobian(model, Configuration.fixed(q), frame)[0:3]
        dq = J.T @ np.linalg.solve(J @ J.T + lam2 * np.eye(3), e)
        q = np.clip(q + dq, lo, hi)

    if best_res > UNREACHABLE_RESIDUAL:
        raise Unreachable(
            f"target {target} unreachable: best residual {best_res:.3e} m",
            best_q=best_q, best_residual=best_res,
        )
    raise NoConvergence(
        f"no convergence to {tolerance:g} within {max_iters} iterations "
        f"(best residual {best_res:.3e} m)",
        best_q=best_q, best_residual=best_res,
    )
