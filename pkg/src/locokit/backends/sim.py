"""Physics simulator backend: penalty contact forces into forward dynamics,
integrated with semi-implicit Euler at the control rate (optionally
substepped). The floating base integrates orientation through the
roll-pitch-yaw rate map and errors out hard near its singularity."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..bus import BaseState, JointState, TOPIC_GROUND_TRUTH
from ..errors import DimensionMismatch, NonFiniteState
from ..kindyn import (
    Configuration,
    Velocity,
    euler_rate_map,
    forward_dynamics,
    forward_kinematics,
)
from ..kindyn.numeric import numeric_model
from ..kindyn.backend import impl
from ..model.validate import neutral_configuration
from ..kindyn.ops import _cross3
from ..transforms import rpy_to_matrix, wrap_angle
from .base import Backend
from .contact import ContactParams, contact_force

MAX_STEP = 0.01


@dataclass(frozen=True)
class ContactInfo:
    penetration: float
    normal_force: float


@dataclass(frozen=True)
class SimState:
    conf: Configuration
    vel: Velocity
    t: float
    contacts: dict = field(default_factory=dict)  # frame -> ContactInfo


def point_kinematics(model, conf: Configuration, vel: Velocity, frames):
    """World position and linear velocity of the named frame origins
    (single kinematics pass, shared by contact and GRF code)."""
    nm = numeric_model(model)
    if model.floating_base:
        base_R = rpy_to_matrix(conf.base_rpy)
        base_p = np.asarray(conf.base_pos, dtype=float)
        base_v = np.asarray(vel.base_lin, dtype=float)
        base_w = np.asarray(vel.base_ang, dtype=float)
    else:
        base_R, base_p = np.eye(3), np.zeros(3)
        base_v = base_w = np.zeros(3)
    R = np.zeros((nm.nb, 9))
    p = np.zeros((nm.nb, 3))
    ax = np.zeros((nm.nb, 3))
    impl.fk_pose(nm.parent, nm.jtype, nm.axis, nm.tr_rot, nm.tr_pos,
                 base_R, base_p, np.asarray(conf.q, dtype=float), R, p, ax)
    w = np.zeros((nm.nb, 3))
    v = np.zeros((nm.nb, 3))
    impl.fk_motion(nm.parent, nm.jtype, p, ax, base_p, base_v, base_w,
                   np.asarray(vel.qd, dtype=float), w, v)
    out = {}
    for name in frames:
        bi, R_off, p_off = nm.frame_entry(name)
        if bi < 0:
            pf = base_p + base_R @ p_off
            vf = base_v + _cross3(base_w, pf - base_p)
        else:
            pf = p[bi] + R[bi].reshape(3, 3) @ p_off
            vf = v[bi] + _cross3(w[bi], pf - p[bi])
        out[name] = (pf, vf)
    return out


def sim_step(model, state: SimState, efforts, dt,
             params: ContactParams | None = None, gravity=None) -> SimState:
    """One physics step. Contact forces at the model's contact frames feed
    forward dynamics; velocities integrate first (semi-implicit)."""
    if not (0.0 < dt <= MAX_STEP):
        raise ValueError(f"dt must be in (0, {MAX_STEP}], got {dt}")
    efforts = np.asarray(efforts, dtype=float)
    if efforts.shape != (model.nq,):
        raise DimensionMismatch(f"expected {model.nq} joint efforts")
    params = params or ContactParams()

    conf, vel = state.conf, state.vel
    forces = {}
    contacts = {}
    if model.contact_frames:
        pk = point_kinematics(model, conf, vel, model.contact_frames)
        for name, (pos, pvel) in pk.items():
            F = contact_force(pos, pvel, params)
            forces[name] = F
            contacts[name] = ContactInfo(
                penetration=max(0.0, -float(pos[2])), normal_force=float(F[2])
            )

    if model.floating_base:
        tau = np.concatenate([np.zeros(6), efforts])
    else:
        tau = efforts
    a = forward_dynamics(model, conf, vel, tau, forces, gravity)

    if model.floating_base:
        base_v = vel.base_lin + dt * a[0:3]
        base_w = vel.base_ang + dt * a[3:6]
        qd = vel.qd + dt * a[6:]
        E = euler_rate_map(conf.base_rpy)  # raises EulerSingularity near lock
        rpy_dot = np.linalg.solve(E, base_w)
        new_conf = Configuration(
            conf.base_pos + dt * base_v,
            conf.base_rpy + dt * rpy_dot,
            conf.q + dt * qd,
        )
        new_vel = Velocity(base_v, base_w, qd)
    else:
        qd = vel.qd + dt * a
        new_conf = Configuration.fixed(conf.q + dt * qd)
        new_vel = Velocity.fixed(qd)

    new_state = SimState(new_conf, new_vel, state.t + dt, contacts)
    if not (
        np.all(np.isfinite(new_conf.q))
        and np.all(np.isfinite(new_vel.qd))
        and np.all(np.isfinite(new_conf.base_pos))
        and np.all(np.isfinite(new_vel.base_lin))
    ):
        raise NonFiniteState(
            f"simulation diverged at t={state.t:.4f}", last_good=state
        )
    return new_state


class SimBackend(Backend):
    """Simulated plant. Offers all three hardware interfaces; position and
    velocity commands are realized by an internal PD over the robot's gains
    (actuator emulation), saturated at the model effort limits."""

    capabilities = frozenset(("effort", "position", "velocity"))

    def __init__(self, model, gains, spawn=None, params=None, *, bus=None,
                 gravity=None, substeps=1, initial_q=None):
        self.model = model
        self.gains = gains
        self.params = params or ContactParams()
        self.gravity = gravity
        self.substeps = max(1, int(substeps))
        self._bus = bus
        spawn = np.zeros(6) if spawn is None else np.asarray(spawn, dtype=float)
        q0 = neutral_configuration(model) if initial_q is None else np.asarray(
            initial_q, dtype=float
        )
        if model.floating_base:
            conf = Configuration(spawn[0:3], spawn[3:6], q0)
        else:
            conf = Configuration.fixed(q0)
        self.state = SimState(conf, Velocity.zero(model), 0.0)
        self._spawn_state = self.state
        self._cmd = {"effort": None, "position": None, "velocity": None}
        self._applied = np.zeros(model.nq)
        self._publish_ground_truth()

    # -- contract ----------------------------------------------------------

    def read_state(self):
        return JointState(self.state.t, self.state.conf.q, self.state.vel.qd,
                          self._applied)

    def base_state(self):
        if not self.model.floating_base:
            return None
        conf, vel = self.state.conf, self.state.vel
        return BaseState(self.state.t, conf.base_pos, wrap_angle(conf.base_rpy),
                         vel.base_lin, vel.base_ang)

    def write_command(self, *, effort=None, position=None, velocity=None):
        if effort is not None:
            self._check_interface("effort")
            self._cmd["effort"] = np.asarray(effort, dtype=float)
        if position is not None:
            self._check_interface("position")
            self._cmd["position"] = np.asarray(position, dtype=float)
        if velocity is not None:
            self._check_interface("velocity")
            self._cmd["velocity"] = np.asarray(velocity, dtype=float)

    def step(self, dt):
        eff = self._effective_effort()
        sub_dt = dt / self.substeps
        state = self.state
        for _ in range(self.substeps):
            state = sim_step(self.model, state, eff, sub_dt, self.params,
                             self.gravity)
        self.state = state
        self._applied = eff
        self._publish_ground_truth()

    def reset(self):
        self.state = self._spawn_state
        self._cmd = {"effort": None, "position": None, "velocity": None}
        self._applied = np.zeros(self.model.nq)

    # -- internals ----------------------------------------------------------

    def _effective_effort(self):
        q, qd = self.state.conf.q, self.state.vel.qd
        if self._cmd["effort"] is not None:
            eff = self._cmd["effort"]
        elif self._cmd["position"] is not None:
            qd_ref = self._cmd["velocity"]
            if qd_ref is None:
                qd_ref = np.zeros_like(qd)
            eff = self.gains.kp * (self._cmd["position"] - q) + self.gains.kd * (
                qd_ref - qd
            )
        elif self._cmd["velocity"] is not None:
            eff = self.gains.kd * (self._cmd["velocity"] - qd)
        else:
            eff = np.zeros_like(q)
        lim = self.model.effort_limits
        return np.clip(eff, -lim, lim)

    def _publish_ground_truth(self):
        if self._bus is not None and self.model.floating_base:
            self._bus.publish(TOPIC_GROUND_TRUTH, self.base_state())

    @property
    def contact_truth(self):
        """Per-foot penalty-model contact info from the last step."""
        return dict(self.state.contacts)


def make_sim_backend(model, gains, spawn=None, params=None, **kwargs) -> SimBackend:
    return SimBackend(model, gains, spawn, params, **kwargs)
