"""Benchmark: compiled extension vs pure-Python kernels on the hot
per-tick routines (FK, inverse dynamics, mass matrix) plus a full
simulator step.

Run:  python3 benchmarks/bench_kernels.py [--repeats N]
"""
import argparse
import time

import numpy as np

from locokit.kindyn import _kernels_py
from locokit.kindyn.numeric import numeric_model
from locokit.robots import load_robot
from locokit.transforms import rpy_to_matrix

try:
    from locokit.kindyn import _kernels
    MODULES = {"python": _kernels_py, "compiled": _kernels}
except ImportError:
    MODULES = {"python": _kernels_py}


def timeit(fn, repeats):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_model(name, repeats):
    model, _ = load_robot(name)
    nm = numeric_model(model)
    nb, nv = nm.nb, model.nv
    rng = np.random.default_rng(0)
    q = rng.uniform(-1, 1, nb)
    qd = rng.uniform(-1, 1, nb)
    qdd = rng.uniform(-1, 1, nb)
    if nm.floating:
        bR = rpy_to_matrix(rng.uniform(-0.3, 0.3, 3))
        bp = rng.uniform(-1, 1, 3)
        bw, bv, bal, ba = (rng.uniform(-1, 1, 3) for _ in range(4))
    else:
        bR, bp = np.eye(3), np.zeros(3)
        bw = bv = bal = ba = np.zeros(3)
    g = np.array([0.0, 0.0, -9.81])

    rows = []
    for label, mod in MODULES.items():
        R = np.zeros((nb, 9)); p = np.zeros((nb, 3)); ax = np.zeros((nb, 3))
        w = np.zeros((nb, 3)); v = np.zeros((nb, 3))
        tau = np.zeros(nv); M = np.zeros((nv, nv))

        def fk():
            mod.fk_pose(nm.parent, nm.jtype, nm.axis, nm.tr_rot, nm.tr_pos,
                        bR, bp, q, R, p, ax)

        def rnea():
            mod.rnea(nm.parent, nm.jtype, nm.mass, nm.com, nm.inertia,
                     R, p, ax, qd, qdd, bR, bp, bw, bv, bal, ba,
                     nm.base_mass, nm.base_com, nm.base_inertia, g,
                     nm.floating, tau)

        def crba():
            mod.crba(nm.parent, nm.jtype, nm.mass, nm.com, nm.inertia,
                     R, p, ax, bR, bp, nm.base_mass, nm.base_com,
                     nm.base_inertia, nm.floating, M)

        fk()
        rows.append((label, timeit(fk, repeats), timeit(rnea, repeats),
                     timeit(crba, repeats)))
    return rows


def bench_sim_step(name, repeats):
    import os
    from locokit.backends import SimState, sim_step
    from locokit.kindyn import Configuration, Velocity

    model, meta = load_robot(name)
    q0 = np.zeros(model.nq)
    conf = (Configuration(np.array([0, 0, 0.35]), np.zeros(3), q0)
            if model.floating_base else Configuration.fixed(q0))
    state = SimState(conf, Velocity.zero(model), 0.0)
    eff = np.zeros(model.nq)

    def step():
        sim_step(model, state, eff, 1e-3)

    return timeit(step, repeats)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=2000)
    args = ap.parse_args()

    print(f"{'model':8s} {'backend':9s} {'fk_pose':>10s} {'rnea':>10s} "
          f"{'crba':>10s}")
    speedups = []
    for name in ("pend1", "arm2", "arm6", "quad12"):
        rows = bench_model(name, args.repeats)
        for label, t_fk, t_rnea, t_crba in rows:
            print(f"{name:8s} {label:9s} {t_fk * 1e6:9.2f}u {t_rnea * 1e6:9.2f}u "
                  f"{t_crba * 1e6:9.2f}u")
        if len(rows) == 2:
            py, comp = rows[0], rows[1]
            speedups.append((name, py[2] / comp[2], py[3] / comp[3]))
    if speedups:
        print("\nspeedup (python / compiled):")
        for name, s_rnea, s_crba in speedups:
            print(f"  {name:8s} rnea x{s_rnea:5.1f}   crba x{s_crba:5.1f}")

    print(f"\nfull simulator step (current backend):")
    for name in ("pend1", "quad12"):
        t = bench_sim_step(name, max(200, args.repeats // 10))
        print(f"  {name:8s} {t * 1e6:9.1f} us/step")


if __name__ == "__main__":
    main()
