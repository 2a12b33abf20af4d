"""Visualizer server: ``GET /model`` plus a ``/ws`` websocket streaming
state frames at a fixed rate and accepting interaction messages.

Two session kinds sit behind one app:

* kinematics (``mode: "kin"``): joint values come from the client's
  sliders, no dynamics; ``set_joint`` mutates the served state.
* simulation (``mode: "sim"``): the state mirrors a live run;
  pause/step/reset steer it, sliders are disabled unless the server
  advertises teach mode.
"""
from __future__ import annotations

import asyncio
import threading

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from ..model import model_to_dict
from ..model.validate import neutral_configuration
from ..transforms import wrap_angle

DEFAULT_RATE = 30.0


class KinematicsSession:
    mode = "kin"

    def __init__(self, model, rate=DEFAULT_RATE):
        self.model = model
        self.rate = rate
        self._lock = threading.Lock()
        self._q = neutral_configuration(model)
        self._t = 0.0
        self._index = {n: i for i, n in enumerate(model.joint_names)}

    def set_joint(self, name, value):
        i = self._index.get(name)
        if i is None:
            return {"type": "error", "text": f"unknown joint {name!r}"}
        lo, hi = self.model.position_limits
        clamped = float(np.clip(value, lo[i], hi[i]))
        with self._lock:
            q = np.array(self._q)
            q[i] = clamped
            self._q = q
            self._t += 1.0 / self.rate
        reply = {"type": "ack", "cmd": "set_joint", "name": name, "value": clamped}
        if clamped != value:
            reply["warning"] = "value clamped to joint limits"
        return reply

    def state_frame(self):
        with self._lock:
            frame = {"type": "state", "t": self._t, "q": [float(v) for v in self._q]}
            self._t += 1.0 / self.rate
        if self.model.floating_base:
            frame["base"] = {"pos": [0.0, 0.0, 0.0], "rpy": [0.0, 0.0, 0.0]}
        return frame

    def handle(self, msg):
        if msg.get("type") == "set_joint":
            return self.set_joint(msg.get("name"), float(msg.get("value", 0.0)))
        return {"type": "error", "text": f"unsupported in kin mode: {msg.get('type')}"}


class SimSession:
    """Mirrors a running simulation; steering goes through a control object
    exposing pause()/resume()/step_once()/reset() and a tick counter."""

    mode = "sim"

    def __init__(self, model, tap, control=None, rate=DEFAULT_RATE,
                 teach_mode=False):
        self.model = model
        self.tap = tap  # callable -> (t, q, base_pos, base_rpy) latest state
        self.control = control
        self.rate = rate
        self.teach_mode = teach_mode

    def state_frame(self):
        t, q, base_pos, base_rpy = self.tap()
        frame = {"type": "state", "t": float(t), "q": [float(v) for v in q]}
        if self.model.floating_base and base_pos is not None:
            frame["base"] = {
                "pos": [float(v) for v in base_pos],
                "rpy": [float(v) for v in wrap_angle(base_rpy)],
            }
        return frame

    def handle(self, msg):
        kind = msg.get("type")
        if kind == "set_joint" and not self.teach_mode:
            return {"type": "error", "text": "sliders disabled (no teach_mode)"}
        if self.control is None:
            return {"type": "error", "text": "simulation is not steerable"}
        if kind == "pause":
            self.control.pause()
        elif kind == "step":
            self.control.step_once()
        elif kind == "reset":
            self.control.reset()
        else:
            return {"type": "error", "text": f"unknown message {kind!r}"}
        return {"type": "ack", "cmd": kind, "tick": self.control.tick}


def create_app(session, static_dir=None) -> FastAPI:
    app = FastAPI(title="locokit visualizer")

    @app.get("/model")
    def get_model():
        return JSONResponse(content=model_to_dict(session.model))

    @app.websocket("/ws")
    async def ws(websocket: WebSocket):
        await websocket.accept()
        await websocket.send_json(
            {"type": "hello", "mode": session.mode, "rate": session.rate}
        )

        async def sender():
            # Deadline-based pacing: sleep overshoot doesn't accumulate,
            # keeping the long-run stream rate at the advertised value.
            period = 1.0 / session.rate
            loop = asyncio.get_running_loop()
            next_t = loop.time()
            while True:
                await websocket.send_json(session.state_frame())
                next_t += period
                await asyncio.sleep(max(0.0, next_t - loop.time()))

        task = asyncio.create_task(sender())
        try:
            while True:
                msg = await websocket.receive_json()
                reply = session.handle(msg)
                if reply is not None:
                    await websocket.send_json(reply)
        except WebSocketDisconnect:
            pass
        finally:
            task.cancel()

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        # Mounted last so /model and /ws keep precedence.
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def serve(app, port=8080, host="127.0.0.1"):
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")
