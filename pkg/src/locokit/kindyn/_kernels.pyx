# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: same contracts as _kernels_py, C loops throughout.

These are the hot inner-loop routines (forward kinematics, inverse
dynamics, composite-rigid-body mass matrix) executed once or more per
control tick; see benchmarks/bench_kernels.py for the speedup over the
pure-Python module.
"""
import numpy as np

from libc.math cimport cos, sin

BACKEND_NAME = "compiled"


cdef inline void cross3(const double* a, const double* b, double* out) noexcept nogil:
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]


cdef inline double dot3(const double* a, const double* b) noexcept nogil:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


cdef inline void matvec3(const double* R, const double* v, double* out) noexcept nogil:
    out[0] = R[0] * v[0] + R[1] * v[1] + R[2] * v[2]
    out[1] = R[3] * v[0] + R[4] * v[1] + R[5] * v[2]
    out[2] = R[6] * v[0] + R[7] * v[1] + R[8] * v[2]


cdef inline void matmul3(const double* A, const double* B, double* out) noexcept nogil:
    cdef int i, j, k
    for i in range(3):
        for j in range(3):
            out[3 * i + j] = (
                A[3 * i] * B[j] + A[3 * i + 1] * B[3 + j] + A[3 * i + 2] * B[6 + j]
            )


cdef inline void rot_similarity(const double* R, const double* I, double* out) noexcept nogil:
    # out = R I R^T
    cdef double tmp[9]
    cdef int i, j
    matmul3(R, I, tmp)
    for i in range(3):
        for j in range(3):
            out[3 * i + j] = (
                tmp[3 * i] * R[3 * j]
                + tmp[3 * i + 1] * R[3 * j + 1]
                + tmp[3 * i + 2] * R[3 * j + 2]
            )


cdef inline void rodrigues(const double* a, double angle, double* R) noexcept nogil:
    cdef double c = cos(angle)
    cdef double s = sin(angle)
    cdef double omc = 1.0 - c
    cdef double x = a[0], y = a[1], z = a[2]
    R[0] = c + omc * x * x
    R[1] = omc * x * y - s * z
    R[2] = omc * x * z + s * y
    R[3] = omc * x * y + s * z
    R[4] = c + omc * y * y
    R[5] = omc * y * z - s * x
    R[6] = omc * x * z - s * y
    R[7] = omc * y * z + s * x
    R[8] = c + omc * z * z


def fk_pose(const int[::1] parent, const unsigned char[::1] jtype,
            const double[:, ::1] axis, const double[:, ::1] tr_rot,
            const double[:, ::1] tr_pos, const double[:, ::1] base_R,
            const double[::1] base_p, const double[::1] q,
            double[:, ::1] R_out, double[:, ::1] p_out, double[:, ::1] ax_out):
    cdef int nb = parent.shape[0]
    cdef int k, bp, i
    cdef double Rj[9]
    cdef double Rq[9]
    cdef double pj[3]
    cdef double aw[3]
    cdef double tmp[3]
    cdef double baseRflat[9]
    cdef const double* Rp
    cdef const double* pp
    for i in range(3):
        baseRflat[3 * i] = base_R[i, 0]
        baseRflat[3 * i + 1] = base_R[i, 1]
        baseRflat[3 * i + 2] = base_R[i, 2]
    for k in range(nb):
        bp = parent[k]
        if bp < 0:
            Rp = baseRflat
            pp = &base_p[0]
        else:
            Rp = &R_out[bp, 0]
            pp = &p_out[bp, 0]
        matmul3(Rp, &tr_rot[k, 0], Rj)
        matvec3(Rp, &tr_pos[k, 0], tmp)
        pj[0] = pp[0] + tmp[0]
        pj[1] = pp[1] + tmp[1]
        pj[2] = pp[2] + tmp[2]
        matvec3(Rj, &axis[k, 0], aw)
        if jtype[k] == 0:
            rodrigues(&axis[k, 0], q[k], Rq)
            matmul3(Rj, Rq, &R_out[k, 0])
            p_out[k, 0] = pj[0]
            p_out[k, 1] = pj[1]
            p_out[k, 2] = pj[2]
        else:
            for i in range(9):
                R_out[k, i] = Rj[i]
            p_out[k, 0] = pj[0] + aw[0] * q[k]
            p_out[k, 1] = pj[1] + aw[1] * q[k]
            p_out[k, 2] = pj[2] + aw[2] * q[k]
        ax_out[k, 0] = aw[0]
        ax_out[k, 1] = aw[1]
        ax_out[k, 2] = aw[2]


def fk_motion(const int[::1] parent, const unsigned char[::1] jtype,
              const double[:, ::1] p, const double[:, ::1] ax,
              const double[::1] base_p, const double[::1] base_v,
              const double[::1] base_w, const double[::1] qd,
              double[:, ::1] w_out, double[:, ::1] v_out):
    cdef int nb = parent.shape[0]
    cdef int k, bp, i
    cdef double r[3]
    cdef double wxr[3]
    cdef const double* wp
    cdef const double* vp
    cdef const double* pp
    for k in range(nb):
        bp = parent[k]
        if bp < 0:
            wp = &base_w[0]
            vp = &base_v[0]
            pp = &base_p[0]
        else:
            wp = &w_out[bp, 0]
            vp = &v_out[bp, 0]
            pp = &p[bp, 0]
        for i in range(3):
            r[i] = p[k, i] - pp[i]
        cross3(wp, r, wxr)
        if jtype[k] == 0:
            for i in range(3):
                w_out[k, i] = wp[i] + ax[k, i] * qd[k]
                v_out[k, i] = vp[i] + wxr[i]
        else:
            for i in range(3):
                w_out[k, i] = wp[i]
                v_out[k, i] = vp[i] + wxr[i] + ax[k, i] * qd[k]


def rnea(const int[::1] parent, const unsigned char[::1] jtype,
         const double[::1] mass, const double[:, ::1] com,
         const double[:, ::1] inertia, const double[:, ::1] R,
         const double[:, ::1] p, const double[:, ::1] ax,
         const double[::1] qd, const double[::1] qdd,
         const double[:, ::1] base_R, const double[::1] base_p,
         const double[::1] base_w, const double[::1] base_v,
         const double[::1] base_alpha, const double[::1] base_a,
         double base_mass, const double[::1] base_com,
         const double[::1] base_inertia, const double[::1] g,
         bint floating, double[::1] tau_out):
    cdef int nb = parent.shape[0]
    cdef int k, bp, i, off
    w_np = np.empty((nb, 3))
    v_np = np.empty((nb, 3))
    al_np = np.empty((nb, 3))
    ac_np = np.empty((nb, 3))
    f_np = np.empty((nb, 3))
    n_np = np.empty((nb, 3))
    cdef double[:, ::1] w = w_np
    cdef double[:, ::1] v = v_np
    cdef double[:, ::1] al = al_np
    cdef double[:, ::1] ac = ac_np
    cdef double[:, ::1] f = f_np
    cdef double[:, ::1] n = n_np

    cdef double r[3]
    cdef double t1[3]
    cdef double t2[3]
    cdef double t3[3]
    cdef double rc[3]
    cdef double cw[3]
    cdef double acom[3]
    cdef double Fk[3]
    cdef double Nk[3]
    cdef double Iw[9]
    cdef double fb[3]
    cdef double nbm[3]
    cdef double baseRflat[9]
    cdef const double* wp
    cdef const double* vp
    cdef const double* alp
    cdef const double* ap
    cdef const double* pp

    for i in range(3):
        baseRflat[3 * i] = base_R[i, 0]
        baseRflat[3 * i + 1] = base_R[i, 1]
        baseRflat[3 * i + 2] = base_R[i, 2]
        fb[i] = 0.0
        nbm[i] = 0.0

    for k in range(nb):
        bp = parent[k]
        if bp < 0:
            wp = &base_w[0]
            vp = &base_v[0]
            alp = &base_alpha[0]
            ap = &base_a[0]
            pp = &base_p[0]
        else:
            wp = &w[bp, 0]
            vp = &v[bp, 0]
            alp = &al[bp, 0]
            ap = &ac[bp, 0]
            pp = &p[bp, 0]
        for i in range(3):
            r[i] = p[k, i] - pp[i]
        cross3(wp, r, t1)  # wp x r
        if jtype[k] == 0:
            cross3(wp, &ax[k, 0], t2)  # wp x a
            for i in range(3):
                w[k, i] = wp[i] + ax[k, i] * qd[k]
                v[k, i] = vp[i] + t1[i]
                al[k, i] = alp[i] + t2[i] * qd[k] + ax[k, i] * qdd[k]
            cross3(alp, r, t2)
            cross3(wp, t1, t3)  # wp x (wp x r)
            for i in range(3):
                ac[k, i] = ap[i] + t2[i] + t3[i]
        else:
            for i in range(3):
                w[k, i] = wp[i]
                v[k, i] = vp[i] + t1[i] + ax[k, i] * qd[k]
                al[k, i] = alp[i]
            cross3(alp, r, t2)
            cross3(wp, t1, t3)
            for i in range(3):
                rc[i] = ax[k, i] * qd[k]
            cross3(wp, rc, t1)  # wp x (a qd)
            for i in range(3):
                ac[k, i] = ap[i] + t2[i] + t3[i] + 2.0 * t1[i] + ax[k, i] * qdd[k]

        matvec3(&R[k, 0], &com[k, 0], rc)
        for i in range(3):
            cw[i] = p[k, i] + rc[i]
        cross3(&al[k, 0], rc, t1)
        cross3(&w[k, 0], rc, t2)
        cross3(&w[k, 0], t2, t3)
        for i in range(3):
            acom[i] = ac[k, i] + t1[i] + t3[i]
            Fk[i] = mass[k] * (acom[i] - g[i])
        rot_similarity(&R[k, 0], &inertia[k, 0], Iw)
        matvec3(Iw, &al[k, 0], t1)
        matvec3(Iw, &w[k, 0], t2)
        cross3(&w[k, 0], t2, t3)
        for i in range(3):
            Nk[i] = t1[i] + t3[i]
        cross3(rc, Fk, t1)
        for i in range(3):
            f[k, i] = Fk[i]
            n[k, i] = Nk[i] + t1[i]

    off = 6 if floating else 0
    for k in range(nb - 1, -1, -1):
        if jtype[k] == 0:
            tau_out[off + k] = dot3(&ax[k, 0], &n[k, 0])
        else:
            tau_out[off + k] = dot3(&ax[k, 0], &f[k, 0])
        bp = parent[k]
        if bp >= 0:
            for i in range(3):
                r[i] = p[k, i] - p[bp, i]
            cross3(r, &f[k, 0], t1)
            for i in range(3):
                f[bp, i] += f[k, i]
                n[bp, i] += n[k, i] + t1[i]
        elif floating:
            for i in range(3):
                r[i] = p[k, i] - base_p[i]
            cross3(r, &f[k, 0], t1)
            for i in range(3):
                fb[i] += f[k, i]
                nbm[i] += n[k, i] + t1[i]

    if floating:
        matvec3(baseRflat, &base_com[0], rc)
        cross3(&base_alpha[0], rc, t1)
        cross3(&base_w[0], rc, t2)
        cross3(&base_w[0], t2, t3)
        for i in range(3):
            acom[i] = base_a[i] + t1[i] + t3[i]
            Fk[i] = base_mass * (acom[i] - g[i])
        rot_similarity(baseRflat, &base_inertia[0], Iw)
        matvec3(Iw, &base_alpha[0], t1)
        matvec3(Iw, &base_w[0], t2)
        cross3(&base_w[0], t2, t3)
        cross3(rc, Fk, t2)
        for i in range(3):
            tau_out[i] = fb[i] + Fk[i]
            tau_out[3 + i] = nbm[i] + t1[i] + t3[i] + t2[i]


def crba(const int[::1] parent, const unsigned char[::1] jtype,
         const double[::1] mass, const double[:, ::1] com,
         const double[:, ::1] inertia, const double[:, ::1] R,
         const double[:, ::1] p, const double[:, ::1] ax,
         const double[:, ::1] base_R, const double[::1] base_p,
         double base_mass, const double[::1] base_com,
         const double[::1] base_inertia, bint floating,
         double[:, ::1] M_out):
    cdef int nb = parent.shape[0]
    cdef int nv = M_out.shape[0]
    cdef int k, bp, i, j, jj, off
    cm_np = np.empty(nb)
    cmc_np = np.empty((nb, 3))
    cI_np = np.empty((nb, 9))
    cdef double[::1] cm = cm_np
    cdef double[:, ::1] cmc = cmc_np
    cdef double[:, ::1] cI = cI_np

    cdef double cw[3]
    cdef double Iw[9]
    cdef double Sw[3]
    cdef double Sv[3]
    cdef double Fn[3]
    cdef double Ff[3]
    cdef double t1[3]
    cdef double ei[3]
    cdef double c2
    cdef double baseRflat[9]

    for i in range(nv):
        for j in range(nv):
            M_out[i, j] = 0.0

    for k in range(nb):
        matvec3(&R[k, 0], &com[k, 0], cw)
        for i in range(3):
            cw[i] += p[k, i]
        rot_similarity(&R[k, 0], &inertia[k, 0], Iw)
        c2 = dot3(cw, cw)
        cm[k] = mass[k]
        for i in range(3):
            cmc[k, i] = mass[k] * cw[i]
        for i in range(3):
            for j in range(3):
                cI[k, 3 * i + j] = Iw[3 * i + j] + mass[k] * (
                    (c2 if i == j else 0.0) - cw[i] * cw[j]
                )

    off = 6 if floating else 0
    for k in range(nb - 1, -1, -1):
        # S_k in Plucker-at-origin coordinates
        if jtype[k] == 0:
            for i in range(3):
                Sw[i] = ax[k, i]
            cross3(&p[k, 0], &ax[k, 0], Sv)
        else:
            for i in range(3):
                Sw[i] = 0.0
                Sv[i] = ax[k, i]
        # F = I^c S  ->  (n, f)
        matvec3(&cI[k, 0], Sw, Fn)
        cross3(&cmc[k, 0], Sv, t1)
        for i in range(3):
            Fn[i] += t1[i]
        cross3(&cmc[k, 0], Sw, t1)
        for i in range(3):
            Ff[i] = cm[k] * Sv[i] - t1[i]

        M_out[off + k, off + k] = dot3(Sw, Fn) + dot3(Sv, Ff)
        j = parent[k]
        while j >= 0:
            if jtype[j] == 0:
                for i in range(3):
                    Sw[i] = ax[j, i]
                cross3(&p[j, 0], &ax[j, 0], Sv)
            else:
                for i in range(3):
                    Sw[i] = 0.0
                    Sv[i] = ax[j, i]
            M_out[off + k, off + j] = M_out[off + j, off + k] = (
                dot3(Sw, Fn) + dot3(Sv, Ff)
            )
            j = parent[j]
        if floating:
            for i in range(3):
                # linear base col e_i: S = (0, e_i) -> pairing = Ff[i]
                M_out[off + k, i] = M_out[i, off + k] = Ff[i]
                # angular base col e_i: S = (e_i, base_p x e_i)
                ei[0] = 0.0
                ei[1] = 0.0
                ei[2] = 0.0
                ei[i] = 1.0
                cross3(&base_p[0], ei, t1)
                M_out[off + k, 3 + i] = M_out[3 + i, off + k] = (
                    Fn[i] + dot3(t1, Ff)
                )
        bp = parent[k]
        if bp >= 0:
            cm[bp] += cm[k]
            for i in range(3):
                cmc[bp, i] += cmc[k, i]
            for i in range(9):
                cI[bp, i] += cI[k, i]

    if not floating:
        return

    # Whole-robot composite for the 6x6 base block.
    for i in range(3):
        baseRflat[3 * i] = base_R[i, 0]
        baseRflat[3 * i + 1] = base_R[i, 1]
        baseRflat[3 * i + 2] = base_R[i, 2]
    cdef double tm = base_mass
    cdef double tmc[3]
    cdef double tI[9]
    matvec3(baseRflat, &base_com[0], cw)
    for i in range(3):
        cw[i] += base_p[i]
    rot_similarity(baseRflat, &base_inertia[0], Iw)
    c2 = dot3(cw, cw)
    for i in range(3):
        tmc[i] = base_mass * cw[i]
    for i in range(3):
        for j in range(3):
            tI[3 * i + j] = Iw[3 * i + j] + base_mass * (
                (c2 if i == j else 0.0) - cw[i] * cw[j]
            )
    for k in range(nb):
        if parent[k] < 0:
            tm += cm[k]
            for i in range(3):
                tmc[i] += cmc[k, i]
            for i in range(9):
                tI[i] += cI[k, i]

    cdef double Sb_w[3]
    cdef double Sb_v[3]
    cdef double ej[3]
    cdef double pxej[3]
    for i in range(6):
        if i < 3:
            for j in range(3):
                Sb_w[j] = 0.0
                Sb_v[j] = 1.0 if j == i else 0.0
        else:
            for j in range(3):
                Sb_w[j] = 1.0 if j == i - 3 else 0.0
            cross3(&base_p[0], Sb_w, Sb_v)
        matvec3(tI, Sb_w, Fn)
        cross3(tmc, Sb_v, t1)
        for j in range(3):
            Fn[j] += t1[j]
        cross3(tmc, Sb_w, t1)
        for j in range(3):
            Ff[j] = tm * Sb_v[j] - t1[j]
        for jj in range(3):
            M_out[jj, i] = Ff[jj]
            ej[0] = 0.0
            ej[1] = 0.0
            ej[2] = 0.0
            ej[jj] = 1.0
            cross3(&base_p[0], ej, pxej)
            M_out[3 + jj, i] = Fn[jj] + dot3(pxej, Ff)
