"""Command-line entry points.

Exit codes: 0 ok, 2 input error (bad files/flags), 3 runtime fault.
"""
from __future__ import annotations

import json
import sys
import threading
import time

import click
import numpy as np

from . import robots
from .backends import load_world
from .demos import DEMOS
from .errors import BackendFault, LocokitError, ModelError, NonFiniteState
from .kindyn import backend_name
from .model import validate_model
from .session import run_simulation
from .vizserver import KinematicsSession, SimSession, create_app, serve


@click.group(help=__doc__)
def main():
    pass


def _load_or_exit(model_arg):
    try:
        return robots.load_robot(model_arg)
    except ModelError as e:
        click.echo(f"error: {e}", err=True)
        if isinstance(e, LocokitError) and hasattr(e, "diagnostics"):
            for d in e.diagnostics:
                click.echo(f"  {d.severity}: {d.element}: {d.message}", err=True)
        sys.exit(2)


@main.command()
@click.option("--model", "model_arg", required=True, help="robot name or .urdf path")
@click.option("--serve", "port", default=8080, show_default=True, help="HTTP port")
@click.option("--rate", default=30.0, show_default=True, help="state stream rate, Hz")
@click.option("--ui", "ui_dir", default=None,
              help="directory with the built browser client to serve at /")
def visualize(model_arg, port, rate, ui_dir):
    """Interactive kinematics check: joints from browser sliders, FK per
    update, no dynamics."""
    model, _ = _load_or_exit(model_arg)
    session = KinematicsSession(model, rate=rate)
    app = create_app(session, static_dir=ui_dir)
    click.echo(f"serving {model.name} on http://127.0.0.1:{port} (kinematics mode)")
    serve(app, port=port)


class _SteerableBackend:
    """Wraps a plant so a viz client can pause/step/reset the run."""

    def __init__(self, inner):
        self.inner = inner
        self.capabilities = inner.capabilities
        self.model = inner.model
        self.tick = 0
        self._paused = False
        self._step_tokens = 0
        self._lock = threading.Lock()

    def read_state(self):
        return self.inner.read_state()

    def base_state(self):
        return self.inner.base_state()

    def write_command(self, **kw):
        return self.inner.write_command(**kw)

    def step(self, dt):
        while True:
            with self._lock:
                if not self._paused:
                    break
                if self._step_tokens > 0:
                    self._step_tokens -= 1
                    break
            time.sleep(0.002)
        self.inner.step(dt)
        self.tick += 1

    def pause(self):
        with self._lock:
            self._paused = not self._paused

    def step_once(self):
        with self._lock:
            self._step_tokens += 1

    def reset(self):
        if hasattr(self.inner, "reset"):
            self.inner.reset()


@main.command()
@click.option("--model", "model_arg", required=True)
@click.option("--config", "config_arg", default=None,
              help="gains JSON (defaults to <robot>.json)")
@click.option("--real-robot", type=bool, default=False, show_default=True,
              help="true: mock hardware driver, false: simulator")
@click.option("--hz", default=1000.0, show_default=True)
@click.option("--duration", default=2.0, show_default=True, help="seconds")
@click.option("--spawn", nargs=3, type=float, default=None, help="X Y Z")
@click.option("--log", "log_dir", default=None, help="artifact directory")
@click.option("--serve", "port", default=None, type=int,
              help="stream the run to a viz client (switches to wall clock)")
@click.option("--world", "world_file", default=None, help="world JSON")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--extra", multiple=True, help="key=value, recorded in the manifest")
def simulate(model_arg, config_arg, real_robot, hz, duration, spawn, log_dir,
             port, world_file, seed, extra):
    """Launch the control loop against the simulator or the mock driver
    (the digital-twin flag), run homing, hold home under PID."""
    try:
        world = load_world(world_file) if world_file else None
        extra_pairs = tuple(kv.split("=", 1) for kv in extra)
        spawn_v = np.array(spawn) if spawn else None
        if spawn_v is not None:
            spawn_v = np.concatenate([spawn_v, np.zeros(3)])
    except (OSError, ValueError, json.JSONDecodeError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)

    steer = {}

    def control_wrap(backend):
        wrapped = _SteerableBackend(backend)
        steer["backend"] = wrapped
        return wrapped

    kwargs = dict(
        gains_file=config_arg,
        real_robot=real_robot,
        hz=hz,
        duration=duration,
        spawn=spawn_v,
        log_dir=log_dir,
        world=world,
        seed=seed,
        extra_args=extra_pairs,
    )

    try:
        if port is not None:
            kwargs["time_source"] = "wall"
            kwargs["backend_control"] = control_wrap
            result_holder = {}

            def runner():
                result_holder["result"] = run_simulation(model_arg, **kwargs)

            t = threading.Thread(target=runner, daemon=True)
            # Build the session against the model before the run starts.
            model, _ = _load_or_exit(model_arg)
            t.start()
            while "backend" not in steer and t.is_alive():
                time.sleep(0.01)
            backend = steer.get("backend")
            if backend is None:
                t.join()
                result = result_holder.get("result")
            else:
                def tap():
                    st = backend.read_state()
                    base = backend.base_state()
                    return (
                        st.t, st.q,
                        base.pos if base else None,
                        base.rpy if base else None,
                    )

                session = SimSession(model, tap, control=backend)
                app = create_app(session)
                click.echo(f"streaming run on http://127.0.0.1:{port}")
                serve(app, port=port)
                t.join()
                result = result_holder.get("result")
        else:
            result = run_simulation(model_arg, **kwargs)
    except ModelError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    except (BackendFault, NonFiniteState) as e:
        click.echo(f"runtime fault: {e}", err=True)
        sys.exit(3)

    s = result.summary
    click.echo(
        f"ran {s['ticks']} ticks (kernels: {backend_name()}); "
        f"mean period {s['mean_period'] * 1e3:.3f} ms, "
        f"max jitter {s['max_jitter'] * 1e3:.3f} ms"
    )
    if s.get("final_error") is not None:
        click.echo(f"final |q - q_home| = {s['final_error']:.2e} rad")
    if result.log_path:
        click.echo(f"log: {result.log_path}")
        click.echo(f"manifest: {result.manifest_path}")


@main.command()
@click.option("--name", required=True, help="pickreach | stand")
@click.option("--log", "log_dir", default=None)
@click.option("--seed", default=0, type=int)
def demo(name, log_dir, seed):
    """Run a scripted scenario and report its pass/fail summary."""
    fn = DEMOS.get(name)
    if fn is None:
        click.echo(f"error: unknown demo {name!r}; available: "
                   f"{', '.join(sorted(DEMOS))}", err=True)
        sys.exit(2)
    try:
        result = fn(log_dir=log_dir, seed=seed)
    except (BackendFault, NonFiniteState) as e:
        click.echo(f"runtime fault: {e}", err=True)
        sys.exit(3)
    for k, v in result.summary.items():
        click.echo(f"{k}: {v}")
    if not result.summary.get("passed"):
        click.echo(f"FAILED criterion: {result.summary.get('criterion')}", err=True)
        sys.exit(3)
    click.echo("PASSED")


@main.command()
@click.option("--model", "model_arg", required=True)
def check(model_arg):
    """Validate a robot description and dump its structure."""
    model, _ = _load_or_exit(model_arg)
    diags = validate_model(model)
    for w in model.warnings:
        click.echo(f"parser warning: {w}")
    for d in diags:
        click.echo(f"{d.severity}: {d.element}: {d.message}")

    children = {}
    for j in model.joints:
        children.setdefault(j.parent, []).append(j)

    def show(link, depth):
        mass = model.link_map[link].inertia.mass
        click.echo(f"{'  ' * depth}{link} (mass {mass:g} kg)")
        for j in children.get(link, []):
            click.echo(f"{'  ' * depth}  [{j.kind} {j.name}]")
            show(j.child, depth + 1)

    show(model.root_link, 0)

    def reach(link, acc):
        best = acc + max(
            (float(np.linalg.norm(f.xyz)) for f in model.frames if f.link == link),
            default=0.0,
        )
        for j in children.get(link, []):
            ext = float(np.linalg.norm(j.origin_xyz))
            if j.kind == "prismatic":
                ext += max(abs(j.lower), abs(j.upper))
            best = max(best, reach(j.child, acc + ext))
        return best

    click.echo(f"total mass: {model.total_mass:g} kg")
    click.echo(f"movable joints: {model.nq}")
    click.echo(f"workspace radius bound: {reach(model.root_link, 0.0):.3f} m")
    if model.contact_frames:
        click.echo(f"contact frames: {', '.join(model.contact_frames)}")
    if any(d.severity == "error" for d in diags):
        sys.exit(2)


if __name__ == "__main__":
    main()
