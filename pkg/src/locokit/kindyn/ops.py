"""Rigid-body kinematics and dynamics over :class:`RobotModel`.

Conventions (used by every consumer in the framework):

* generalized velocity/force layout: ``[base_lin; base_ang; joints]``,
  world-aligned base coordinates, for floating-base models;
* Jacobians are world-aligned, rows = linear(3) then angular(3);
* base orientation is fixed-axis roll-pitch-yaw; its rates map to world
  angular velocity through :func:`euler_rate_map` (hard error near the
  pitch singularity, never silent regularization);
* default gravity is (0, 0, -9.81) m/s^2, overridable per call.
"""
from __future__ import annotations

import numpy as np

from ..errors import (
    DimensionMismatch,
    EulerSingularity,
    SingularMassMatrix,
    ZeroMass,
)
from ..transforms import RigidTransform, rpy_to_matrix
from .backend import impl
from .numeric import numeric_model
from .types import Configuration, KinDynSnapshot, Velocity

DEFAULT_GRAVITY = np.array([0.0, 0.0, -9.81])


def _check_conf(model, conf: Configuration):
    if conf.q.shape != (model.nq,):
        raise DimensionMismatch(
            f"q has length {conf.q.shape[0] if conf.q.ndim else '?'}, "
            f"model has {model.nq} movable joints"
        )


def _check_vel(model, vel: Velocity):
    if vel.qd.shape != (model.nq,):
        raise DimensionMismatch("qd length does not match the model")


def _base_pose(model, conf: Configuration):
    if model.floating_base:
        return rpy_to_matrix(conf.base_rpy), np.asarray(conf.base_pos, dtype=float)
    return np.eye(3), np.zeros(3)


def _fk_arrays(model, conf: Configuration):
    nm = numeric_model(model)
    base_R, base_p = _base_pose(model, conf)
    R = np.zeros((nm.nb, 9))
    p = np.zeros((nm.nb, 3))
    ax = np.zeros((nm.nb, 3))
    impl.fk_pose(nm.parent, nm.jtype, nm.axis, nm.tr_rot, nm.tr_pos,
                 base_R, base_p, np.asarray(conf.q, dtype=float), R, p, ax)
    return nm, base_R, base_p, R, p, ax


def _motion_arrays(nm, base_p, p, ax, vel: Velocity):
    w = np.zeros((nm.nb, 3))
    v = np.zeros((nm.nb, 3))
    impl.fk_motion(nm.parent, nm.jtype, p, ax, base_p,
                   np.asarray(vel.base_lin, dtype=float),
                   np.asarray(vel.base_ang, dtype=float),
                   np.asarray(vel.qd, dtype=float), w, v)
    return w, v


def forward_kinematics(model, conf: Configuration) -> dict:
    """World pose of every link frame and attached frame."""
    _check_conf(model, conf)
    nm, base_R, base_p, R, p, _ = _fk_arrays(model, conf)
    poses = {}
    for name, (bi, R_off, p_off) in nm.frames.items():
        if bi < 0:
            Rb, pb = base_R, base_p
        else:
            Rb, pb = R[bi].reshape(3, 3), p[bi]
        poses[name] = RigidTransform(Rb @ R_off, pb + Rb @ p_off)
    return poses


def frame_pose(model, conf: Configuration, frame: str) -> RigidTransform:
    _check_conf(model, conf)
    nm, base_R, base_p, R, p, _ = _fk_arrays(model, conf)
    bi, R_off, p_off = nm.frame_entry(frame)
    if bi < 0:
        return RigidTransform(base_R @ R_off, base_p + base_R @ p_off)
    Rb, pb = R[bi].reshape(3, 3), p[bi]
    return RigidTransform(Rb @ R_off, pb + Rb @ p_off)


def _skew(v):
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def _cross3(a, b):
    # np.cross carries heavy axis-normalization overhead for single vectors
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def frame_jacobian(model, conf: Configuration, frame: str) -> np.ndarray:
    """6 x n_v world-aligned Jacobian (linear rows, then angular) such that
    ``J @ v`` is the frame's world twist."""
    _check_conf(model, conf)
    nm, base_R, base_p, R, p, ax = _fk_arrays(model, conf)
    bi, R_off, p_off = nm.frame_entry(frame)
    if bi >= 0:
        pf = p[bi] + R[bi].reshape(3, 3) @ p_off
    else:
        pf = base_p + base_R @ p_off
    n_v = model.nv
    off = 6 if model.floating_base else 0
    J = np.zeros((6, n_v))
    for k in nm.chain_to(frame):
        col = off + k
        if nm.jtype[k] == 0:
            J[0:3, col] = _cross3(ax[k], pf - p[k])
            J[3:6, col] = ax[k]
        else:
            J[0:3, col] = ax[k]
    if model.floating_base:
        J[0:3, 0:3] = np.eye(3)
        J[3:6, 3:6] = np.eye(3)
        J[0:3, 3:6] = -_skew(pf - base_p)
    return J


def _acc_parts(model, acc):
    acc = np.asarray(acc, dtype=float)
    if acc.shape != (model.nv,):
        raise DimensionMismatch(f"acceleration must have length {model.nv}")
    if model.floating_base:
        return acc[0:3], acc[3:6], acc[6:]
    return np.zeros(3), np.zeros(3), acc


def rnea(model, conf: Configuration, vel: Velocity, acc, gravity=None) -> np.ndarray:
    """Generalized forces tau with M(q) acc + C(q,v) v + g(q) = tau."""
    _check_conf(model, conf)
    _check_vel(model, vel)
    g = DEFAULT_GRAVITY if gravity is None else np.asarray(gravity, dtype=float)
    nm, base_R, base_p, R, p, ax = _fk_arrays(model, conf)
    base_a, base_alpha, qdd = _acc_parts(model, acc)
    tau = np.zeros(model.nv)
    impl.rnea(nm.parent, nm.jtype, nm.mass, nm.com, nm.inertia, R, p, ax,
              np.asarray(vel.qd, dtype=float), qdd,
              base_R, base_p,
              np.asarray(vel.base_ang, dtype=float),
              np.asarray(vel.base_lin, dtype=float),
              base_alpha, base_a,
              nm.base_mass, nm.base_com, nm.base_inertia,
              g, nm.floating, tau)
    return tau


def nonlinear_effects(model, conf, vel, gravity=None) -> np.ndarray:
    """Coriolis + centrifugal + gravity generalized forces."""
    return rnea(model, conf, vel, np.zeros(model.nv), gravity)


def gravity_terms(model, conf, gravity=None) -> np.ndarray:
    zero = Velocity(np.zeros(3), np.zeros(3), np.zeros(model.nq))
    return rnea(model, conf, zero, np.zeros(model.nv), gravity)


def mass_matrix(model, conf: Configuration) -> np.ndarray:
    """Joint-space mass matrix (composite-rigid-body algorithm)."""
    _check_conf(model, conf)
    nm, base_R, base_p, R, p, ax = _fk_arrays(model, conf)
    M = np.zeros((model.nv, model.nv))
    impl.crba(nm.parent, nm.jtype, nm.mass, nm.com, nm.inertia, R, p, ax,
              base_R, base_p, nm.base_mass, nm.base_com, nm.base_inertia,
              nm.floating, M)
    return M


def _cholesky_or_raise(M):
    try:
        L = np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        cond = np.linalg.cond(M) if np.all(np.isfinite(M)) else np.inf
        raise SingularMassMatrix(cond) from None
    d = np.diag(L)
    # kappa_2(M) >= (max diag(L) / min diag(L))^2: cheap lower bound.
    if d.min() <= 0 or (d.max() / d.min()) ** 2 > 1e12:
        raise SingularMassMatrix(np.linalg.cond(M))
    return L


def forward_dynamics(model, conf, vel, tau, ext_forces=None, gravity=None) -> np.ndarray:
    """Solve M a = tau + sum J_c^T F - nle for the acceleration.

    ``ext_forces`` maps frame names to world-frame 3-vector forces applied
    at the frame origin (the contact channel of the simulator). One shared
    kinematics pass feeds the mass matrix, the bias forces and the contact
    force projections; this is the per-tick hot path of the simulator.
    """
    tau = np.asarray(tau, dtype=float)
    if tau.shape != (model.nv,):
        raise DimensionMismatch(f"tau must have length {model.nv}")
    _check_vel(model, vel)
    g = DEFAULT_GRAVITY if gravity is None else np.asarray(gravity, dtype=float)
    nm, base_R, base_p, R, p, ax = _fk_arrays(model, conf)

    M = np.zeros((model.nv, model.nv))
    impl.crba(nm.parent, nm.jtype, nm.mass, nm.com, nm.inertia, R, p, ax,
              base_R, base_p, nm.base_mass, nm.base_com, nm.base_inertia,
              nm.floating, M)
    _cholesky_or_raise(M)

    nle = np.zeros(model.nv)
    zero3 = np.zeros(3)
    impl.rnea(nm.parent, nm.jtype, nm.mass, nm.com, nm.inertia, R, p, ax,
              np.asarray(vel.qd, dtype=float), np.zeros(model.nq),
              base_R, base_p,
              np.asarray(vel.base_ang, dtype=float),
              np.asarray(vel.base_lin, dtype=float),
              zero3, zero3,
              nm.base_mass, nm.base_com, nm.base_inertia,
              g, nm.floating, nle)

    rhs = tau - nle
    if ext_forces:
        off = 6 if model.floating_base else 0
        for frame, F in ext_forces.items():
            F = np.asarray(F, dtype=float)
            bi, R_off, p_off = nm.frame_entry(frame)
            if bi >= 0:
                pf = p[bi] + R[bi].reshape(3, 3) @ p_off
            else:
                pf = base_p + base_R @ p_off
            for k in nm.chain_to(frame):
                if nm.jtype[k] == 0:
                    rhs[off + k] += _cross3(ax[k], pf - p[k]) @ F
                else:
                    rhs[off + k] += ax[k] @ F
            if model.floating_base:
                rhs[0:3] += F
                rhs[3:6] += _cross3(pf - base_p, F)
    return np.linalg.solve(M, rhs)


def com_state(model, conf, vel):
    """Center of mass, its velocity, and the total mass."""
    _check_conf(model, conf)
    _check_vel(model, vel)
    nm, base_R, base_p, R, p, ax = _fk_arrays(model, conf)
    w, v = _motion_arrays(nm, base_p, p, ax, vel)
    total = nm.base_mass + float(np.sum(nm.mass))
    if total <= 0.0:
        raise ZeroMass("model has zero total mass")
    csum = np.zeros(3)
    vsum = np.zeros(3)
    if nm.base_mass > 0:
        cb = base_p + base_R @ nm.base_com
        vb = np.asarray(vel.base_lin) + _cross3(np.asarray(vel.base_ang), cb - base_p)
        csum += nm.base_mass * cb
        vsum += nm.base_mass * vb
    for k in range(nm.nb):
        ck = p[k] + R[k].reshape(3, 3) @ nm.com[k]
        vk = v[k] + _cross3(w[k], ck - p[k])
        csum += nm.mass[k] * ck
        vsum += nm.mass[k] * vk
    return csum / total, vsum / total, total


def centroidal(model, conf, vel):
    """Centroidal inertia (6x6, [linear; angular] blocks) and momentum
    ([linear momentum; angular momentum about the CoM])."""
    com, vcom, total = com_state(model, conf, vel)
    nm, base_R, base_p, R, p, ax = _fk_arrays(model, conf)
    w, v = _motion_arrays(nm, base_p, p, ax, vel)
    h_lin = np.zeros(3)
    h_ang = np.zeros(3)
    I_ang = np.zeros((3, 3))

    def add(mass_k, c_w, I_w, w_k, v_origin, origin):
        nonlocal h_lin, h_ang, I_ang
        v_c = v_origin + _cross3(w_k, c_w - origin)
        h_lin += mass_k * v_c
        r = c_w - com
        h_ang += I_w @ w_k + _cross3(r, mass_k * v_c)
        I_ang += I_w + mass_k * ((r @ r) * np.eye(3) - np.outer(r, r))

    if nm.base_mass > 0:
        add(nm.base_mass,
            base_p + base_R @ nm.base_com,
            base_R @ nm.base_inertia.reshape(3, 3) @ base_R.T,
            np.asarray(vel.base_ang, dtype=float),
            np.asarray(vel.base_lin, dtype=float), base_p)
    for k in range(nm.nb):
        Rk = R[k].reshape(3, 3)
        add(nm.mass[k], p[k] + Rk @ nm.com[k],
            Rk @ nm.inertia[k].reshape(3, 3) @ Rk.T, w[k], v[k], p[k])

    I6 = np.zeros((6, 6))
    I6[0:3, 0:3] = total * np.eye(3)
    I6[3:6, 3:6] = I_ang
    return I6, np.concatenate([h_lin, h_ang])


def euler_rate_map(rpy) -> np.ndarray:
    """E with omega_world = E @ (roll_dot, pitch_dot, yaw_dot)."""
    r, pch, y = np.asarray(rpy, dtype=float)
    if abs(np.cos(pch)) < 1e-6:
        raise EulerSingularity(f"pitch {pch} within 1e-6 of +/-pi/2")
    cy, sy = np.cos(y), np.sin(y)
    cp, sp = np.cos(pch), np.sin(pch)
    return np.array(
        [
            [cy * cp, -sy, 0.0],
            [sy * cp, cy, 0.0],
            [-sp, 0.0, 1.0],
        ]
    )


def update_kinematics(model, conf, vel, gravity=None, t=0.0) -> KinDynSnapshot:
    """One consistent bundle of every kinematic/dynamic quantity."""
    poses = forward_kinematics(model, conf)
    com, vcom, _ = com_state(model, conf, vel)
    M = mass_matrix(model, conf)
    nle = nonlinear_effects(model, conf, vel, gravity)
    gvec = gravity_terms(model, conf, gravity)
    contact_positions = {}
    contact_jacobians = {}
    for cf in model.contact_frames:
        contact_positions[cf] = poses[cf].pos
        contact_jacobians[cf] = frame_jacobian(model, conf, cf)[0:3]
    I6, h6 = centroidal(model, conf, vel)
    return KinDynSnapshot(
        t=t,
        frame_poses=poses,
        com=com,
        vcom=vcom,
        mass_matrix=M,
        nle=nle,
        gravity_vec=gvec,
        contact_positions=contact_positions,
        contact_jacobians=contact_jacobians,
        centroidal_inertia=I6,
        centroidal_momentum=h6,
        gr_forces={},
    )
