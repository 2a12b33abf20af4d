"""Independent reference computations the implementation is tested against.

Everything here deliberately avoids the library's own recursions: the
double-pendulum equations come from a symbolic Lagrangian, potentials from
plain mass sums over forward kinematics, derivatives from finite
differences.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from locokit.kindyn import Configuration, forward_kinematics

GRAVITY_MAG = 9.81


@lru_cache(maxsize=1)
def double_pendulum_lagrangian():
    """Closed-form M, C, G for the planar 2R arm with unit links, point
    masses m1 = m2 = 1 kg at the midpoints, gravity 9.81 along -y.

    Derived symbolically (mass matrix from the kinetic-energy Hessian,
    Coriolis matrix from Christoffel symbols, gravity from dU/dq) and
    lambdified; returns ``tau(q, qd, qdd)``.
    """
    import sympy as sp

    q1, q2, qd1, qd2, qdd1, qdd2 = sp.symbols("q1 q2 qd1 qd2 qdd1 qdd2")
    m1 = m2 = 1
    l1 = sp.Integer(1)
    r1 = r2 = sp.Rational(1, 2)
    g = sp.Rational(981, 100)

    x1 = r1 * sp.cos(q1)
    y1 = r1 * sp.sin(q1)
    x2 = l1 * sp.cos(q1) + r2 * sp.cos(q1 + q2)
    y2 = l1 * sp.sin(q1) + r2 * sp.sin(q1 + q2)

    q = sp.Matrix([q1, q2])
    qd = sp.Matrix([qd1, qd2])
    v1 = sp.Matrix([x1, y1]).jacobian(q) * qd
    v2 = sp.Matrix([x2, y2]).jacobian(q) * qd
    T = sp.Rational(1, 2) * m1 * (v1.T * v1)[0] + sp.Rational(1, 2) * m2 * (v2.T * v2)[0]
    U = m1 * g * y1 + m2 * g * y2

    M = sp.hessian(T, qd)
    C = sp.zeros(2, 2)
    for i in range(2):
        for j in range(2):
            C[i, j] = sum(
                sp.Rational(1, 2)
                * (sp.diff(M[i, j], q[k]) + sp.diff(M[i, k], q[j]) - sp.diff(M[j, k], q[i]))
                * qd[k]
                for k in range(2)
            )
    G = sp.Matrix([sp.diff(U, q1), sp.diff(U, q2)])
    qdd = sp.Matrix([qdd1, qdd2])
    tau = M * qdd + C * qd + G
    return sp.lambdify((q1, q2, qd1, qd2, qdd1, qdd2), [tau[0], tau[1]], "numpy")


def double_pendulum_tau(q, qd, qdd):
    fn = double_pendulum_lagrangian()
    return np.array(fn(q[0], q[1], qd[0], qd[1], qdd[0], qdd[1]))


def potential_energy(model, conf, gravity):
    """U = -sum_i m_i g . c_i from forward kinematics and link masses only."""
    poses = forward_kinematics(model, conf)
    g = np.asarray(gravity, dtype=float)
    U = 0.0
    for link in model.links:
        si = link.inertia
        if si.mass == 0.0:
            continue
        c_world = poses[link.name].apply(si.com)
        U -= si.mass * float(g @ c_world)
    return U


def fd_jacobian(model, conf, frame, h=1e-6):
    """Central finite differences of FK position and orientation."""
    n = model.nq
    J = np.zeros((6, model.nv))
    off = 6 if model.floating_base else 0
    for i in range(n):
        dq = np.zeros(n)
        dq[i] = h
        cp = Configuration(conf.base_pos, conf.base_rpy, conf.q + dq)
        cm = Configuration(conf.base_pos, conf.base_rpy, conf.q - dq)
        Tp = forward_kinematics(model, cp)[frame]
        Tm = forward_kinematics(model, cm)[frame]
        J[0:3, off + i] = (Tp.pos - Tm.pos) / (2 * h)
        # Angular velocity from dR R^T
        dR = (Tp.rot - Tm.rot) / (2 * h)
        T0 = forward_kinematics(model, conf)[frame]
        W = dR @ T0.rot.T
        J[3:6, off + i] = np.array([W[2, 1], W[0, 2], W[1, 0]])
    return J
