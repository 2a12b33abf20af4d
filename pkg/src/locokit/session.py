"""Run orchestration: build a backend from the ``real_robot`` flag, wire the
bus, run startup + homing + hold under the fixed-rate loop, and write the
log and a run manifest.

The manifest records everything needed to reproduce a run (flags, seed,
versions, kernel backend, planner code-path marker) and deliberately
contains no wall-clock timestamps so identical runs serialize identically.
"""
from __future__ import annotations

import json
import platform
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, robots
from .backends import make_mock_hw_backend, make_sim_backend
from .bus import (
    TOPIC_COMMAND,
    TOPIC_DIAGNOSTICS,
    TOPIC_JOINT_STATES,
    Command,
    Diagnostics,
    standard_bus,
)
from .control import ControllerCore, export_csv
from .control.logbuf import LogBuffer
from .kindyn import Configuration, backend_name, gravity_terms
from .lowlevel import LoopClock, homing_trajectory, run_loop, startup_procedure
from .model.validate import neutral_configuration


@dataclass
class RunResult:
    report: object
    core: ControllerCore
    backend: object
    log_path: str | None = None
    manifest_path: str | None = None
    command_log_path: str | None = None
    summary: dict = field(default_factory=dict)


def joint_gravity_at(model, q):
    """Gravity-compensation feedforward at a commanded configuration
    (function of the command only, so open-loop streams stay deterministic;
    base at spawn orientation for floating models)."""
    if model.floating_base:
        conf = Configuration(np.zeros(3), np.zeros(3), np.asarray(q, dtype=float))
        return gravity_terms(model, conf)[6:]
    return gravity_terms(model, Configuration.fixed(q))


def homing_hold_planner(core: ControllerCore, gains, *, gravity_ffwd=True,
                        log=True):
    """Default planner: drive to the home configuration along the startup
    cubic, then hold. Feedforward is evaluated at the commanded position."""
    state = {"q_start": None, "t0": None}

    def planner(t):
        core.spin_once()
        if not core._got_state:
            return
        if state["q_start"] is None:
            state["q_start"] = np.array(core.q)
            state["t0"] = t
        q_des, qd_des = homing_trajectory(
            state["q_start"], gains.q_home, gains.homing_duration, t - state["t0"]
        )
        core.q_des = q_des
        core.qd_des = qd_des
        core.tau_ffwd = (
            joint_gravity_at(core.model, q_des)
            if gravity_ffwd
            else np.zeros_like(q_des)
        )
        core.send_des_jstate()
        if log:
            core.log_data()

    planner.marker = f"{planner.__module__}.homing_hold_planner"
    return planner


def build_backend(model, gains, meta: robots.RobotMeta, *, real_robot,
                  spawn=None, world=None, bus=None, substeps=1):
    """The digital-twin seam: identical call sites, one flag."""
    initial_q = (
        np.array(gains.q_home)
        if meta.initial_q == "home"
        else neutral_configuration(model)
    )
    if real_robot:
        return make_mock_hw_backend(
            model,
            profile=meta.mock_profile,
            interfaces=meta.mock_interfaces,
            params=world.contact if world else None,
            initial_q=initial_q,
        )
    spawn = meta.spawn if spawn is None else spawn
    if world is not None and world.spawn is not None and spawn is None:
        spawn = world.spawn
    return make_sim_backend(
        model,
        gains,
        spawn=spawn,
        params=world.contact if world else None,
        gravity=world.gravity_vec if world else None,
        bus=bus,
        substeps=substeps,
        initial_q=initial_q,
    )


def _export_command_log(commands, path):
    buf = LogBuffer()
    for msg in commands:
        buf.append(
            msg.t if not buf._t or msg.t > buf._t[-1] else buf._t[-1] + 1e-9,
            {"q_des": msg.q_des, "qd_des": msg.qd_des, "tau_ffwd": msg.tau_ffwd},
        )
    return export_csv(buf, path)


def run_simulation(robot_name, *, gains_file=None, real_robot=False, hz=1000.0,
                   duration=2.0, spawn=None, log_dir=None, world=None, seed=0,
                   time_source="sim", planner_factory=None, backend_control=None,
                   extra_args=(), substeps=None, mode=None) -> RunResult:
    """End-to-end run: load robot, build the backend per ``real_robot``,
    startup, home, hold; returns the loop report plus artifact paths."""
    np.random.seed(seed)
    path = robots.resolve_description(robot_name)
    model, meta = robots.load_robot(robot_name)
    gains = robots.load_gains(
        gains_file or robots.default_gains_for(robot_name), model,
        description_path=path,
    )

    if substeps is None:
        substeps = meta.substeps
    n_ticks = int(round(duration * hz))
    bus = standard_bus(command_capacity=max(64, n_ticks + 8))
    backend = build_backend(
        model, gains, meta, real_robot=real_robot, spawn=spawn, world=world,
        bus=bus, substeps=substeps,
    )
    if backend_control is not None:
        backend = backend_control(backend)

    core = ControllerCore(model, gains, bus, tool_frame=meta.tool_frame)
    factory = planner_factory or (
        lambda core_, gains_: homing_hold_planner(core_, gains_)
    )
    planner = factory(core, gains)

    pid, default_mode = startup_procedure(gains, model.effort_limits)
    mode = mode or default_mode
    clock = LoopClock(rate=hz, source=time_source)
    commands_sub = bus.subscribe(TOPIC_COMMAND)
    command_capture = bus.subscribe(TOPIC_COMMAND, capacity=n_ticks + 8)
    diag = lambda d: bus.publish(TOPIC_DIAGNOSTICS, d)

    report = run_loop(
        clock, backend, pid, commands_sub,
        lambda msg: bus.publish(TOPIC_JOINT_STATES, msg),
        duration,
        mode=mode,
        effort_limits=model.effort_limits,
        planner=planner,
        publish_diag=diag,
    )
    core.spin_once()  # ingest the final published state

    result = RunResult(report=report, core=core, backend=backend)
    if log_dir is not None:
        out = Path(log_dir)
        out.mkdir(parents=True, exist_ok=True)
        if len(core.log):
            result.log_path = export_csv(core.log, out / "log.csv")
        result.command_log_path = _export_command_log(
            command_capture.poll(), out / "commands.csv"
        )
        manifest = {
            "robot": str(robot_name),
            "gains": str(gains_file or robots.default_gains_for(robot_name)),
            "real_robot": bool(real_robot),
            "hz": hz,
            "duration": duration,
            "spawn": list(spawn) if spawn is not None else list(meta.spawn),
            "seed": seed,
            "time_source": time_source,
            "substeps": substeps,
            "planner_marker": getattr(planner, "marker", repr(planner)),
            "extra_args": dict(extra_args),
            "versions": {
                "locokit": __version__,
                "numpy": np.__version__,
                "python": platform.python_version(),
                "kernels": backend_name(),
            },
            "ticks": report.ticks,
        }
        mpath = out / "manifest.json"
        mpath.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        result.manifest_path = str(mpath)

    result.summary = {
        "final_error": float(np.max(np.abs(core.q - gains.q_home)))
        if core._got_state
        else None,
        "ticks": report.ticks,
        "mean_period": report.mean_period,
        "max_jitter": report.max_jitter,
    }
    return result
