"""Pure-Python (numpy) kernels: the import-time fallback when the compiled
extension is unavailable, and the reference the extension is tested against.

All kernels share the flattened body arrays of :mod:`.numeric`. World-frame
3-vector recursions throughout; bodies are ordered so ``parent[k] < k``.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def _rodrigues(axis, angle):
    c, s = np.cos(angle), np.sin(angle)
    x, y, z = axis
    K = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return c * np.eye(3) + s * K + (1.0 - c) * np.outer(axis, axis)


def fk_pose(parent, jtype, axis, tr_rot, tr_pos, base_R, base_p, q,
            R_out, p_out, ax_out):
    """Body poses and world joint axes. R_out rows are row-major 3x3."""
    nb = parent.shape[0]
    for k in range(nb):
        bp = parent[k]
        if bp < 0:
            Rp, pp = base_R, base_p
        else:
            Rp, pp = R_out[bp].reshape(3, 3), p_out[bp]
        Rj = Rp @ tr_rot[k].reshape(3, 3)
        pj = pp + Rp @ tr_pos[k]
        a_w = Rj @ axis[k]
        if jtype[k] == 0:  # revolute
            R_out[k] = (Rj @ _rodrigues(axis[k], q[k])).ravel()
            p_out[k] = pj
        else:  # prismatic
            R_out[k] = Rj.ravel()
            p_out[k] = pj + a_w * q[k]
        ax_out[k] = a_w


def fk_motion(parent, jtype, p, ax, base_p, base_v, base_w, qd, w_out, v_out):
    """World angular velocity and origin linear velocity of every body."""
    nb = parent.shape[0]
    for k in range(nb):
        bp = parent[k]
        if bp < 0:
            wp, vp, pp = base_w, base_v, base_p
        else:
            wp, vp, pp = w_out[bp], v_out[bp], p[bp]
        r = p[k] - pp
        if jtype[k] == 0:
            w_out[k] = wp + ax[k] * qd[k]
            v_out[k] = vp + np.cross(wp, r)
        else:
            w_out[k] = wp
            v_out[k] = vp + np.cross(wp, r) + ax[k] * qd[k]


def rnea(parent, jtype, mass, com, inertia, R, p, ax, qd, qdd,
         base_R, base_p, base_w, base_v, base_alpha, base_a,
         base_mass, base_com, base_inertia, g, floating, tau_out):
    """Inverse dynamics: generalized forces for the given motion.

    Newton-Euler in world coordinates. For floating base the first six
    entries of ``tau_out`` are the required base wrench
    [force; moment about the base origin], conjugate to
    [base_lin; base_ang] world velocities.
    """
    nb = parent.shape[0]
    w = np.zeros((nb, 3))
    v = np.zeros((nb, 3))
    al = np.zeros((nb, 3))
    ac = np.zeros((nb, 3))
    f = np.zeros((nb, 3))
    n = np.zeros((nb, 3))

    for k in range(nb):
        bp = parent[k]
        if bp < 0:
            wp, vp, alp, ap, pp = base_w, base_v, base_alpha, base_a, base_p
        else:
            wp, vp, alp, ap, pp = w[bp], v[bp], al[bp], ac[bp], p[bp]
        r = p[k] - pp
        a_w = ax[k]
        if jtype[k] == 0:
            w[k] = wp + a_w * qd[k]
            v[k] = vp + np.cross(wp, r)
            al[k] = alp + np.cross(wp, a_w) * qd[k] + a_w * qdd[k]
            ac[k] = ap + np.cross(alp, r) + np.cross(wp, np.cross(wp, r))
        else:
            w[k] = wp
            v[k] = vp + np.cross(wp, r) + a_w * qd[k]
            al[k] = alp
            ac[k] = (
                ap + np.cross(alp, r) + np.cross(wp, np.cross(wp, r))
                + 2.0 * np.cross(wp, a_w * qd[k]) + a_w * qdd[k]
            )
        # Net inertial wrench of body k (moment about its origin p[k]).
        Rk = R[k].reshape(3, 3)
        c_w = p[k] + Rk @ com[k]
        rc = c_w - p[k]
        a_com = ac[k] + np.cross(al[k], rc) + np.cross(w[k], np.cross(w[k], rc))
        F = mass[k] * (a_com - g)
        Iw = Rk @ inertia[k].reshape(3, 3) @ Rk.T
        N = Iw @ al[k] + np.cross(w[k], Iw @ w[k])
        f[k] = F
        n[k] = N + np.cross(rc, F)

    off = 6 if floating else 0
    f_base = np.zeros(3)
    n_base = np.zeros(3)
    for k in range(nb - 1, -1, -1):
        tau_out[off + k] = ax[k] @ (n[k] if jtype[k] == 0 else f[k])
        bp = parent[k]
        if bp >= 0:
            f[bp] = f[bp] + f[k]
            n[bp] = n[bp] + n[k] + np.cross(p[k] - p[bp], f[k])
        elif floating:
            f_base += f[k]
            n_base += n[k] + np.cross(p[k] - base_p, f[k])

    if floating:
        c_w = base_p + base_R @ base_com
        rc = c_w - base_p
        a_com = base_a + np.cross(base_alpha, rc) + np.cross(
            base_w, np.cross(base_w, rc)
        )
        F = base_mass * (a_com - g)
        Iw = base_R @ base_inertia.reshape(3, 3) @ base_R.T
        N = Iw @ base_alpha + np.cross(base_w, Iw @ base_w)
        tau_out[0:3] = f_base + F
        tau_out[3:6] = n_base + N + np.cross(rc, F)


def crba(parent, jtype, mass, com, inertia, R, p, ax,
         base_R, base_p, base_mass, base_com, base_inertia, floating, M_out):
    """Joint-space mass matrix via composite rigid bodies.

    Spatial quantities are expressed in Plucker coordinates at the world
    origin; composites stay (mass, mass*com, rotational inertia about the
    origin), which compose by plain addition.
    """
    nb = parent.shape[0]
    cm = np.array(mass)  # composite mass
    cmc = np.zeros((nb, 3))  # composite mass * com (world)
    cI = np.zeros((nb, 3, 3))  # composite rotational inertia about origin

    for k in range(nb):
        Rk = R[k].reshape(3, 3)
        c_w = p[k] + Rk @ com[k]
        Iw = Rk @ inertia[k].reshape(3, 3) @ Rk.T
        cmc[k] = mass[k] * c_w
        cI[k] = Iw + mass[k] * ((c_w @ c_w) * np.eye(3) - np.outer(c_w, c_w))

    def subspace(k):
        if jtype[k] == 0:
            return ax[k], np.cross(p[k], ax[k])  # (omega, v_origin)
        return np.zeros(3), ax[k]

    def apply(m, mc, I, wv):
        wk, vk = wv
        return I @ wk + np.cross(mc, vk), m * vk - np.cross(mc, wk)

    off = 6 if floating else 0
    M_out[:] = 0.0
    # Children have larger indices, so walking k downward folds each body's
    # full subtree into cm/cmc/cI[k] before k itself is consumed.
    for k in range(nb - 1, -1, -1):
        n_k, f_k = apply(cm[k], cmc[k], cI[k], subspace(k))
        wk, vk = subspace(k)
        M_out[off + k, off + k] = wk @ n_k + vk @ f_k
        j = parent[k]
        while j >= 0:
            wj, vj = subspace(j)
            M_out[off + k, off + j] = M_out[off + j, off + k] = wj @ n_k + vj @ f_k
            j = parent[j]
        if floating:
            # Base columns: linear e_i -> (0, e_i); angular e_i about the
            # base origin -> (e_i, base_p x e_i).
            for i in range(3):
                e = np.zeros(3)
                e[i] = 1.0
                M_out[off + k, i] = M_out[i, off + k] = f_k[i]
                nb_pair = e @ n_k + np.cross(base_p, e) @ f_k
                M_out[off + k, 3 + i] = M_out[3 + i, off + k] = nb_pair
        bp = parent[k]
        if bp >= 0:
            cm[bp] += cm[k]
            cmc[bp] += cmc[k]
            cI[bp] += cI[k]

    if floating:
        c_w = base_p + base_R @ base_com
        Iw = base_R @ base_inertia.reshape(3, 3) @ base_R.T
        tm = base_mass
        tmc = base_mass * c_w
        tI = Iw + base_mass * ((c_w @ c_w) * np.eye(3) - np.outer(c_w, c_w))
        for k in range(nb):
            if parent[k] < 0:
                tm += cm[k]
                tmc += cmc[k]
                tI += cI[k]
        for i in range(3):
            ei = np.zeros(3)
            ei[i] = 1.0
            Si = (np.zeros(3), ei)
            Sa = (ei, np.cross(base_p, ei))
            ni, fi = apply(tm, tmc, tI, Si)
            na, fa = apply(tm, tmc, tI, Sa)
            for jj in range(3):
                ej = np.zeros(3)
                ej[jj] = 1.0
                M_out[jj, i] = ej @ fi
                M_out[3 + jj, i] = ej @ ni + np.cross(base_p, ej) @ fi
                M_out[jj, 3 + i] = ej @ fa
                M_out[3 + jj, 3 + i] = ej @ na + np.cross(base_p, ej) @ fa
