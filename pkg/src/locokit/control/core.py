"""High-level controller core.

Ingests plant state from the bus, refreshes kinematics/dynamics, emits
commands, and logs every tick. One core instance is owned by one planner
loop; snapshots handed out are immutable copies.

The fixed-base behavior is a strict subset of the floating-base behavior:
the same class serves both, with the base-state path enabled by the model's
floating flag (floating cores subscribe to ``/ground_truth`` in addition to
``/joint_states``).
"""
from __future__ import annotations

import numpy as np

from .. import robots
from ..bus import (
    BaseState,
    Command,
    JointState,
    MessageBus,
    TOPIC_COMMAND,
    TOPIC_GROUND_TRUTH,
    TOPIC_JOINT_STATES,
    standard_bus,
)
from ..backends.contact import ContactParams, contact_force
from ..backends.sim import point_kinematics
from ..errors import (
    DimensionMismatch,
    NoStateYet,
    NotApplicable,
    NotFloatingBase,
    SingularLegJacobian,
)
from ..kindyn import (
    Configuration,
    Velocity,
    gravity_terms,
    update_kinematics,
)
from ..kindyn.numeric import numeric_model
from ..transforms import rpy_to_matrix
from .logbuf import LogBuffer

BASE_LABELS = ("base_x", "base_y", "base_z", "base_roll", "base_pitch", "base_yaw")


class ControllerCore:
    def __init__(self, model, gains, bus: MessageBus, *, tool_frame=None):
        self.model = model
        self.gains = gains
        self.bus = bus
        self.tool_frame = tool_frame
        n = model.nq

        self.t = 0.0
        self.q = np.zeros(n)
        self.qd = np.zeros(n)
        self.tau = np.zeros(n)
        self.q_des = np.array(gains.q_home)
        self.qd_des = np.zeros(n)
        self.tau_ffwd = np.zeros(n)

        self.base_pos = np.zeros(3)
        self.base_rpy = np.zeros(3)
        self.base_lin = np.zeros(3)
        self.base_ang = np.zeros(3)
        self.b_R_w = np.eye(3)

        self.x_ee = None  # tool pose in base frame (fixed base)
        self.contact_force_ee = np.zeros(3)
        self.contact_moment_ee = np.zeros(3)

        self.snapshot = None
        self.log = LogBuffer()
        self.stale_drops = 0
        self._got_state = False

        self._sub_js = bus.subscribe(TOPIC_JOINT_STATES, capacity=64)
        self._sub_gt = (
            bus.subscribe(TOPIC_GROUND_TRUTH, capacity=64)
            if model.floating_base
            else None
        )

    # -- state ingestion -----------------------------------------------------

    def receive_jstate(self, msg: JointState):
        if len(msg.q) != self.model.nq:
            raise DimensionMismatch(
                f"joint state has {len(msg.q)} joints, model has {self.model.nq}"
            )
        if self._got_state and msg.t < self.t:
            self.stale_drops += 1
            return
        self.t = msg.t
        self.q = np.array(msg.q)
        self.qd = np.array(msg.qd)
        self.tau = np.array(msg.tau)
        self._got_state = True

    def receive_pose(self, msg: BaseState):
        if not self.model.floating_base:
            raise NotFloatingBase("fixed-base core has no base pose")
        self.base_pos = np.array(msg.pos)
        self.base_rpy = np.array(msg.rpy)
        self.base_lin = np.array(msg.lin)
        self.base_ang = np.array(msg.ang)
        # b_R_w maps world vectors into the base frame.
        self.b_R_w = rpy_to_matrix(msg.rpy).T

    def spin_once(self):
        """Drain the subscriptions, applying messages in arrival order."""
        for msg in self._sub_js.poll():
            self.receive_jstate(msg)
        if self._sub_gt is not None:
            for msg in self._sub_gt.poll():
                self.receive_pose(msg)

    # -- command emission ------------------------------------------------------

    def send_des_jstate(self):
        cmd = Command(self.t, self.q_des, self.qd_des, self.tau_ffwd)
        self.bus.publish(TOPIC_COMMAND, cmd)
        return cmd

    # -- kinematics -------------------------------------------------------------

    def configuration(self) -> Configuration:
        if self.model.floating_base:
            return Configuration(self.base_pos, self.base_rpy, self.q)
        return Configuration.fixed(self.q)

    def velocity(self) -> Velocity:
        if self.model.floating_base:
            return Velocity(self.base_lin, self.base_ang, self.qd)
        return Velocity.fixed(self.qd)

    def refresh_kinematics(self):
        if not self._got_state:
            raise NoStateYet("refresh_kinematics before any /joint_states message")
        conf, vel = self.configuration(), self.velocity()
        snap = update_kinematics(self.model, conf, vel, t=self.t)
        if self.model.floating_base and self.model.contact_frames:
            try:
                snap.gr_forces = self.estimate_gr_forces(snap)
            except SingularLegJacobian:
                snap.gr_forces = {}
        if self.tool_frame is not None:
            base_pose = snap.frame_poses[self.model.root_link]
            tool_pose = snap.frame_poses[self.tool_frame]
            self.x_ee = base_pose.inverse().compose(tool_pose)
            self._update_ee_contact(conf, vel)
        self.snapshot = snap
        return snap

    def _update_ee_contact(self, conf, vel):
        # Penalty-model estimate when the tool touches the ground, else zero
        # (point contact: zero moment).
        pk = point_kinematics(self.model, conf, vel, [self.tool_frame])
        pos, pvel = pk[self.tool_frame]
        self.contact_force_ee = contact_force(pos, pvel, ContactParams())
        self.contact_moment_ee = np.zeros(3)

    # -- ground reaction estimate --------------------------------------------

    def _leg_chains(self):
        nm = numeric_model(self.model)
        chains = {}
        for cf in self.model.contact_frames:
            chains[cf] = nm.chain_to(cf)
        return chains

    def estimate_gr_forces(self, snapshot=None):
        """Quasi-static per-leg estimate: F = -(J_leg^T)^-1 tau_leg, world
        frame, force exerted by the ground on the foot. Defined for legs
        with exactly 3 joints between trunk and foot."""
        snap = snapshot or self.snapshot
        if snap is None:
            raise NoStateYet("no kinematics snapshot yet")
        chains = self._leg_chains()
        if not chains:
            raise NotApplicable("model has no contact frames")
        off = 6 if self.model.floating_base else 0
        out = {}
        for cf, chain in chains.items():
            if len(chain) != 3:
                raise NotApplicable(
                    f"leg {cf} has {len(chain)} joints, estimator needs 3"
                )
            cols = [off + k for k in chain]
            J_leg = snap.contact_jacobians[cf][:, cols]
            cond = np.linalg.cond(J_leg)
            if not np.isfinite(cond) or cond > 1e6:
                raise SingularLegJacobian(cf, cond)
            tau_leg = self.tau[list(chain)]
            out[cf] = -np.linalg.solve(J_leg.T, tau_leg)
        return out

    # -- feedforward ------------------------------------------------------------

    def gravity_ffwd(self):
        """Gravity-compensation torques at the current configuration
        (joint part only for floating base)."""
        g = gravity_terms(self.model, self.configuration())
        return g[6:] if self.model.floating_base else g

    # -- logging -----------------------------------------------------------------

    def log_data(self):
        values = {
            "q": self.q,
            "q_des": self.q_des,
            "qd": self.qd,
            "tau": self.tau,
            "tau_ffwd": self.tau_ffwd,
        }
        labels = None
        if self.model.floating_base:
            values["base"] = np.concatenate([self.base_pos, self.base_rpy])
            labels = {"base": list(BASE_LABELS)}
        self.log.append(self.t, values, labels)


class FixtureRegistry:
    """Default registry: the shipped fixtures plus user description files."""

    def load(self, robot_name):
        model, meta = robots.load_robot(robot_name)
        path = robots.resolve_description(robot_name)
        gains = robots.load_gains(
            robots.default_gains_for(robot_name), model, description_path=path
        )
        return model, meta, gains


def load_model_and_publishers(robot_name, bus: MessageBus | None = None,
                              registry=None) -> ControllerCore:
    """Build a core from a robot name: parse the description, load gains,
    create/subscribe the topic triad. The name is the single selector that
    joins description, gains and backend."""
    registry = registry or FixtureRegistry()
    model, meta, gains = registry.load(robot_name)
    bus = bus or standard_bus()
    return ControllerCore(model, gains, bus, tool_frame=meta.tool_frame)
