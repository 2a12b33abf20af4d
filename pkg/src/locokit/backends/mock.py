"""Mock hardware driver: the stand-in for a vendor robot driver, behind the
same plant contract as the simulator. ``ideal`` echoes position commands as
state on the next read and integrates effort commands through the same
dynamics as the simulator; ``lagged`` adds a first-order command filter
(5 ms time constant) and one tick of reporting latency.

A real driver would advance on its own clock; the mock advances its
emulated plant in :meth:`step` so digital-twin runs stay deterministic.
"""
from __future__ import annotations

import numpy as np

from ..bus import JointState
from ..errors import UnsupportedMode
from ..kindyn import Configuration, Velocity
from ..model.validate import neutral_configuration
from .base import Backend
from .contact import ContactParams
from .sim import SimState, sim_step

LAG_TIME_CONSTANT = 0.005


class MockHardwareBackend(Backend):
    def __init__(self, model, profile="ideal", interfaces=("effort", "position", "velocity"),
                 *, params=None, initial_q=None):
        if not interfaces:
            raise UnsupportedMode("mock driver needs at least one interface")
        if profile not in ("ideal", "lagged"):
            raise ValueError(f"unknown mock profile {profile!r}")
        self.model = model
        self.profile = profile
        self.capabilities = frozenset(interfaces)
        self.params = params or ContactParams()
        q0 = neutral_configuration(model) if initial_q is None else np.asarray(
            initial_q, dtype=float
        )
        self._q = np.array(q0)
        self._qd = np.zeros(model.nq)
        self._tau = np.zeros(model.nq)
        self._t = 0.0
        self._sim = SimState(
            Configuration.fixed(q0) if not model.floating_base else Configuration(
                np.zeros(3), np.zeros(3), q0
            ),
            Velocity.zero(model), 0.0,
        )
        self._cmd_kind = None
        self._cmd = None
        self._cmd_vel = None
        self._filtered = np.array(q0)
        self._prev_state = self._snapshot()

    def _snapshot(self):
        return JointState(self._t, self._q, self._qd, self._tau)

    def read_state(self):
        if self.profile == "lagged":
            return self._prev_state
        return self._snapshot()

    def write_command(self, *, effort=None, position=None, velocity=None):
        if effort is not None:
            self._check_interface("effort")
            self._cmd_kind = "effort"
            self._cmd = np.asarray(effort, dtype=float)
        if position is not None:
            self._check_interface("position")
            self._cmd_kind = "position"
            self._cmd = np.asarray(position, dtype=float)
            self._cmd_vel = None
        if velocity is not None:
            self._check_interface("velocity")
            if self._cmd_kind == "position":
                self._cmd_vel = np.asarray(velocity, dtype=float)
            else:
                self._cmd_kind = "velocity"
                self._cmd = np.asarray(velocity, dtype=float)

    def step(self, dt):
        self._prev_state = self._snapshot()
        if self._cmd_kind is None:
            self._t += dt
            return
        cmd = self._cmd
        if self.profile == "lagged":
            alpha = 1.0 - np.exp(-dt / LAG_TIME_CONSTANT)
            self._filtered = self._filtered + alpha * (cmd - self._filtered)
            cmd = self._filtered
        if self._cmd_kind == "position":
            prev_q = self._q
            self._q = np.array(cmd)
            self._qd = (
                np.array(self._cmd_vel)
                if (self._cmd_vel is not None and self.profile == "ideal")
                else (self._q - prev_q) / dt
            )
            self._tau = np.zeros_like(self._q)
            self._t += dt
        elif self._cmd_kind == "velocity":
            self._qd = np.array(cmd)
            self._q = self._q + dt * self._qd
            self._tau = np.zeros_like(self._q)
            self._t += dt
        else:  # effort: same dynamics as the simulator
            self._sim = SimState(
                self._sim.conf, self._sim.vel, self._t, self._sim.contacts
            )
            self._sim = sim_step(self.model, self._sim, cmd, dt, self.params)
            self._q = self._sim.conf.q
            self._qd = self._sim.vel.qd
            self._tau = np.array(cmd)
            self._t = self._sim.t

    @property
    def filtered_command(self):
        return np.array(self._filtered)


def make_mock_hw_backend(model, profile="ideal",
                         interfaces=("effort", "position", "velocity"),
                         **kwargs) -> MockHardwareBackend:
    return MockHardwareBackend(model, profile, interfaces, **kwargs)
