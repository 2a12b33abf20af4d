"""Low-level joint controller: PID with feedforward effort, controller
manager mode switching, the homing trajectory, and the fixed-rate loop
(default 1 kHz).

The loop owns its backend: it is the sole writer of plant commands and the
sole publisher of ``/joint_states``. Commands arrive only through bus polls.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .bus import Command, Diagnostics, JointState
from .errors import (
    BackendFault,
    DimensionMismatch,
    NonFiniteInput,
    NonPositiveDuration,
    UnsupportedMode,
)
from .model.types import GainsConfig

CONTROL_MODES = ("point", "trajectory")
CONTROLLER_TYPES = ("position", "torque")


@dataclass
class PidState:
    """Mutable controller memory. The integral accumulator is clamped so the
    ki * integral contribution never exceeds ``integral_limit`` (anti-windup).
    """

    gains: GainsConfig
    integral: np.ndarray
    last_error: np.ndarray
    integral_limit: np.ndarray

    @property
    def n(self):
        return len(self.integral)


@dataclass(frozen=True)
class ControllerMode:
    control_mode: str = "point"  # point | trajectory
    controller_type: str = "torque"  # position | torque

    def __post_init__(self):
        if self.control_mode not in CONTROL_MODES:
            raise UnsupportedMode(f"unknown control mode {self.control_mode!r}")
        if self.controller_type not in CONTROLLER_TYPES:
            raise UnsupportedMode(f"unknown controller type {self.controller_type!r}")


@dataclass
class LoopClock:
    """Tick counter at a fixed rate. In ``sim`` mode tick time is exactly
    index/rate; in ``wall`` mode the loop paces itself on the wall clock."""

    rate: float = 1000.0
    source: str = "sim"  # sim | wall
    tick: int = 0

    @property
    def dt(self):
        return 1.0 / self.rate

    @property
    def now(self):
        return self.tick / self.rate


@dataclass
class LoopReport:
    ticks: int
    mean_period: float
    max_jitter: float
    command_drops: int
    overrun_warnings: int = 0


def startup_procedure(gains: GainsConfig, effort_limits=None):
    """Zeroed PID memory plus the default mode for simulated robots."""
    n = len(gains.joint_names)
    if effort_limits is None:
        limit = np.full(n, np.inf)
    else:
        limit = 0.5 * np.asarray(effort_limits, dtype=float)
    pid = PidState(
        gains=gains,
        integral=np.zeros(n),
        last_error=np.zeros(n),
        integral_limit=limit,
    )
    return pid, ControllerMode("point", "torque")


def control_step(pid: PidState, cmd: Command, state: JointState, dt,
                 effort_limits=None) -> np.ndarray:
    """One impedance-control evaluation:
    tau = kp*(q_des - q) + kd*(qd_des - qd) + ki*int(e) + tau_ffwd,
    with the integral contribution clamped and the sum saturated to the
    per-joint effort limit. Mutates ``pid``."""
    if dt <= 0:
        raise NonPositiveDuration("dt must be > 0")
    g = pid.gains
    n = pid.n
    if len(cmd.q_des) != n or len(state.q) != n:
        raise DimensionMismatch(
            f"command/state have {len(cmd.q_des)}/{len(state.q)} joints, "
            f"controller has {n}"
        )
    if not (np.all(np.isfinite(state.q)) and np.all(np.isfinite(state.qd))):
        raise NonFiniteInput("joint state contains non-finite values")

    e = cmd.q_des - state.q
    ed = cmd.qd_des - state.qd
    pid.integral = pid.integral + e * dt
    with np.errstate(divide="ignore", invalid="ignore"):
        cap = np.where(g.ki > 0, pid.integral_limit / np.where(g.ki > 0, g.ki, 1.0), np.inf)
    pid.integral = np.clip(pid.integral, -cap, cap)
    pid.last_error = e
    tau = g.kp * e + g.kd * ed + g.ki * pid.integral + cmd.tau_ffwd
    if effort_limits is not None:
        lim = np.asarray(effort_limits, dtype=float)
        tau = np.clip(tau, -lim, lim)
    return tau


def homing_trajectory(q_start, q_home, duration, t):
    """Per-joint cubic from start to home with zero boundary velocities;
    clamped to the home configuration for t >= duration."""
    if duration <= 0:
        raise NonPositiveDuration(f"homing duration {duration} must be > 0")
    q_start = np.asarray(q_start, dtype=float)
    q_home = np.asarray(q_home, dtype=float)
    u = min(max(t / duration, 0.0), 1.0)
    s = 3.0 * u * u - 2.0 * u ** 3
    sd = (6.0 * u - 6.0 * u * u) / duration
    delta = q_home - q_start
    return q_start + delta * s, delta * sd


def set_mode(mode: ControllerMode, capabilities) -> ControllerMode:
    """Validate a requested mode against backend capabilities."""
    caps = frozenset(capabilities)
    needed = "effort" if mode.controller_type == "torque" else "position"
    if needed not in caps:
        raise UnsupportedMode(
            f"controller type {mode.controller_type!r} needs the {needed!r} "
            f"interface; backend offers {sorted(caps)}"
        )
    return mode


class _CommandSelector:
    """Latch semantics per control mode.

    point: the newest command fully replaces the previous one.
    trajectory: commands queue and are consumed in timestamp order.
    """

    def __init__(self, mode: ControllerMode):
        self.mode = mode
        self.current = None
        self._pending = []

    def ingest(self, msgs, now):
        if self.mode.control_mode == "point":
            if msgs:
                self.current = msgs[-1]
        else:
            self._pending.extend(msgs)
            self._pending.sort(key=lambda m: m.t)
            while self._pending and self._pending[0].t <= now + 1e-12:
                self.current = self._pending.pop(0)
        return self.current


def run_loop(clock: LoopClock, backend, pid: PidState, commands, publish_state,
             duration, *, mode=None, effort_limits=None, planner=None,
             publish_diag=None) -> LoopReport:
    """Run the fixed-rate control loop for ``duration`` seconds.

    Per tick: read the plant state and publish ``/joint_states``, run the
    optional planner hook (which therefore sees the current state), poll
    ``/command``, evaluate the PID + feedforward law, write the plant
    command, advance the plant. In sim-time mode this performs exactly
    ``round(duration * rate)`` ticks.
    """
    mode = mode or ControllerMode()
    set_mode(mode, backend.capabilities)
    selector = _CommandSelector(mode)
    dt = clock.dt
    n_ticks = int(round(duration * clock.rate))
    periods = []
    overruns = 0
    wall = clock.source == "wall"
    prev_stamp = time.perf_counter()
    start = prev_stamp

    try:
        for i in range(n_ticks):
            t = clock.now
            state = backend.read_state()
            publish_state(JointState(t, state.q, state.qd, state.tau))
            if planner is not None:
                planner(t)
            cmd = selector.ingest(commands.poll(), t)
            if cmd is None:
                # Latch-at-start: hold the measured position until the first
                # command arrives (prevents jump-to-zero on startup).
                cmd = Command(t, state.q, np.zeros_like(state.q),
                              np.zeros_like(state.q))
                selector.current = cmd
            if mode.controller_type == "torque":
                tau = control_step(pid, cmd, state, dt, effort_limits)
                backend.write_command(effort=tau)
            else:
                backend.write_command(position=cmd.q_des, velocity=cmd.qd_des)
            backend.step(dt)
            clock.tick += 1

            if wall:
                deadline = start + (i + 1) * dt
                now_w = time.perf_counter()
                # Hybrid pacing: sleep coarse, spin the last stretch.
                while now_w < deadline:
                    remaining = deadline - now_w
                    if remaining > 0.0005:
                        time.sleep(remaining - 0.0003)
                    now_w = time.perf_counter()
                stamp = time.perf_counter()
                periods.append(stamp - prev_stamp)
                prev_stamp = stamp
                if periods[-1] > 1.2 * dt:
                    overruns += 1
    except Exception as e:
        if isinstance(e, (NonPositiveDuration, DimensionMismatch, NonFiniteInput)):
            raise
        if publish_diag is not None:
            publish_diag(Diagnostics(clock.now, "error", "run_loop", repr(e)))
        raise BackendFault(f"backend fault at tick {clock.tick}: {e!r}") from e

    if wall and periods:
        arr = np.array(periods)
        mean_period = float(arr.mean())
        max_jitter = float(np.max(np.abs(arr - dt)))
    else:
        mean_period = dt
        max_jitter = 0.0
    return LoopReport(
        ticks=n_ticks,
        mean_period=mean_period,
        max_jitter=max_jitter,
        command_drops=commands.drops,
        overrun_warnings=overruns,
    )
