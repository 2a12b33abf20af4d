"""Scripted demo scenarios with pass/fail summaries.

``pickreach``: the 6-DoF arm reaches three workspace targets in sequence
(inverse kinematics -> quintic joint trajectory -> gravity feedforward),
each held within 5 mm.

``stand``: the quadruped drops from its spawn height, settles standing, and
reports ground-reaction forces (simulator truth and the quasi-static
estimate) plus CoM height steadiness.
"""
from __future__ import annotations

import numpy as np

from . import robots
from .control import ik_position, quintic_trajectory
from .kindyn import Configuration, Velocity, com_state, forward_kinematics
from .session import RunResult, homing_hold_planner, joint_gravity_at, run_simulation

PICKREACH_TARGETS = (
    (0.45, 0.25, 0.35),
    (0.35, -0.30, 0.55),
    (0.55, 0.05, 0.20),
)
REACH_TIME = 1.6
HOLD_TIME = 0.6
HOLD_TOLERANCE = 5e-3  # m

STAND_DROP = 0.1  # m above the standing spawn height
STAND_DURATION = 4.0
STAND_GRF_TOL = 0.02  # vs m*g
STAND_ESTIMATE_TOL = 0.05  # estimate vs penalty-contact truth
STAND_COM_STD_TOL = 2e-3  # m over the last second


def _pickreach_planner_factory(model, tool_frame, targets):
    """Open-loop piecewise plan: home -> IK(target1) -> IK(target2) -> ...

    All IK solutions are computed up front from the commanded chain, so the
    command stream is a pure function of time.
    """

    def factory(core, gains):
        waypoints = [np.array(gains.q_home)]
        for tgt in targets:
            waypoints.append(
                ik_position(model, np.array(tgt), tool_frame, waypoints[-1],
                            tolerance=1e-8, max_iters=400)
            )
        phase_T = REACH_TIME + HOLD_TIME

        def planner(t):
            core.spin_once()
            if not core._got_state:
                return
            phase = min(int(t / phase_T), len(targets) - 1)
            local_t = t - phase * phase_T
            q0, qf = waypoints[phase], waypoints[phase + 1]
            q_des, qd_des, _ = quintic_trajectory(q0, qf, REACH_TIME, local_t)
            core.q_des = q_des
            core.qd_des = qd_des
            core.tau_ffwd = joint_gravity_at(model, q_des)
            core.send_des_jstate()
            core.log_data()

        planner.marker = f"{__name__}.pickreach_planner"
        return planner

    return factory


def run_pickreach(*, real_robot=False, hz=1000.0, log_dir=None, seed=0) -> RunResult:
    model, meta = robots.load_robot("arm6")
    targets = PICKREACH_TARGETS
    duration = len(targets) * (REACH_TIME + HOLD_TIME)
    result = run_simulation(
        "arm6",
        real_robot=real_robot,
        hz=hz,
        duration=duration,
        log_dir=log_dir,
        seed=seed,
        planner_factory=_pickreach_planner_factory(model, meta.tool_frame, targets),
    )

    # Hold error: measured tool position at the end of each hold phase.
    log = result.core.log
    times = log.times()
    qs = log.channel("q")
    errors = []
    for i, tgt in enumerate(targets):
        t_end = (i + 1) * (REACH_TIME + HOLD_TIME) - 1.5 / hz
        idx = int(np.searchsorted(times, t_end))
        idx = min(idx, len(times) - 1)
        pos = forward_kinematics(
            model, Configuration.fixed(qs[idx])
        )[meta.tool_frame].pos
        errors.append(float(np.linalg.norm(pos - np.array(tgt))))

    reached = sum(e < HOLD_TOLERANCE for e in errors)
    result.summary = {
        "demo": "pickreach",
        "targets": len(targets),
        "reached": reached,
        "hold_errors_m": errors,
        "max_hold_error_m": max(errors),
        "passed": reached == len(targets),
        "criterion": f"all targets held within {HOLD_TOLERANCE * 1e3:.0f} mm",
    }
    return result


def run_stand(*, hz=1000.0, log_dir=None, seed=0, duration=STAND_DURATION) -> RunResult:
    model, meta = robots.load_robot("quad12")
    spawn = np.array(meta.spawn, dtype=float)
    spawn[2] += STAND_DROP

    com_heights = []

    def factory(core, gains):
        inner = homing_hold_planner(core, gains, gravity_ffwd=True)

        def planner(t):
            inner(t)
            if core._got_state and t >= duration - 1.0:
                com, _, _ = com_state(
                    model, core.configuration(), Velocity.zero(model)
                )
                com_heights.append(float(com[2]))

        planner.marker = inner.marker
        return planner

    result = run_simulation(
        "quad12", hz=hz, duration=duration, spawn=spawn, log_dir=log_dir,
        seed=seed, planner_factory=factory,
    )

    truth = result.backend.contact_truth
    sum_fz_truth = sum(c.normal_force for c in truth.values())
    weight = model.total_mass * 9.81

    result.core.refresh_kinematics()
    est = result.core.snapshot.gr_forces
    sum_fz_est = sum(float(F[2]) for F in est.values()) if est else 0.0

    com_std = float(np.std(com_heights)) if com_heights else float("nan")
    grf_ok = abs(sum_fz_truth - weight) <= STAND_GRF_TOL * weight
    est_ok = est and abs(sum_fz_est - sum_fz_truth) <= STAND_ESTIMATE_TOL * sum_fz_truth
    settled = com_std < STAND_COM_STD_TOL

    result.summary = {
        "demo": "stand",
        "weight_n": weight,
        "sum_fz_truth_n": sum_fz_truth,
        "sum_fz_estimate_n": sum_fz_est,
        "com_height_std_m": com_std,
        "com_height_final_m": com_heights[-1] if com_heights else None,
        "grf_within_2pct": bool(grf_ok),
        "estimate_within_5pct": bool(est_ok),
        "settled": bool(settled),
        "passed": bool(grf_ok and est_ok and settled),
        "criterion": "sum Fz within 2% of m*g, estimate within 5% of truth, "
                     "CoM height std < 2 mm over the last second",
    }
    return result


DEMOS = {"pickreach": run_pickreach, "stand": run_stand}
