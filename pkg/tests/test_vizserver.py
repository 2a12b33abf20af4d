import json
import time

import jsonschema
import numpy as np
import pytest
from fastapi.testclient import TestClient

from locokit.model import MODEL_JSON_SCHEMA
from locokit.robots import load_robot
from locokit.vizserver import KinematicsSession, SimSession, create_app


@pytest.fixture
def kin_client():
    model, _ = load_robot("arm2")
    app = create_app(KinematicsSession(model, rate=60.0))
    with TestClient(app) as client:
        yield client


def _next_state(ws):
    while True:
        msg = ws.receive_json()
        if msg["type"] == "state":
            return msg


class TestModelEndpoint:
    def test_schema(self, kin_client):
        doc = kin_client.get("/model").json()
        jsonschema.validate(doc, MODEL_JSON_SCHEMA)
        assert len(doc["links"]) == 3

    def test_quad_model(self):
        model, _ = load_robot("quad12")
        app = create_app(KinematicsSession(model))
        with TestClient(app) as client:
            doc = client.get("/model").json()
        assert doc["floating_base"] is True
        assert len(doc["contact_frames"]) == 4


class TestWebSocketKin:
    def test_hello_frame(self, kin_client):
        with kin_client.websocket_connect("/ws") as ws:
            hello = ws.receive_json()
            assert hello == {"type": "hello", "mode": "kin", "rate": 60.0}

    def test_state_frames_carry_q(self, kin_client):
        with kin_client.websocket_connect("/ws") as ws:
            ws.receive_json()
            frame = _next_state(ws)
            assert frame["q"] == [0.0, 0.0]

    def test_set_joint_roundtrip(self, kin_client):
        with kin_client.websocket_connect("/ws") as ws:
            ws.receive_json()
            ws.send_json({"type": "set_joint", "name": "q1", "value": 0.5})
            # ack plus the value reflected in a following state frame
            seen_ack = False
            for _ in range(12):
                msg = ws.receive_json()
                if msg["type"] == "ack":
                    seen_ack = True
                if msg["type"] == "state" and msg["q"][0] == 0.5:
                    break
            else:
                pytest.fail("state frame never reflected the slider value")
            assert seen_ack

    def test_out_of_range_clamped_with_warning(self, kin_client):
        with kin_client.websocket_connect("/ws") as ws:
            ws.receive_json()
            ws.send_json({"type": "set_joint", "name": "q1", "value": 99.0})
            for _ in range(12):
                msg = ws.receive_json()
                if msg["type"] == "ack":
                    assert msg["value"] == pytest.approx(np.pi)
                    assert "warning" in msg
                    break
            else:
                pytest.fail("no ack received")

    def test_sim_controls_rejected_in_kin_mode(self, kin_client):
        with kin_client.websocket_connect("/ws") as ws:
            ws.receive_json()
            ws.send_json({"type": "pause"})
            for _ in range(12):
                msg = ws.receive_json()
                if msg["type"] == "error":
                    break
            else:
                pytest.fail("no error for pause in kin mode")


class _FakeControl:
    def __init__(self):
        self.tick = 0
        self.paused = False

    def pause(self):
        self.paused = not self.paused

    def step_once(self):
        self.tick += 1

    def reset(self):
        self.tick = 0


class TestWebSocketSim:
    def _client(self):
        model, _ = load_robot("quad12")
        control = _FakeControl()
        tap = lambda: (0.5, np.zeros(12), np.array([0, 0, 0.35]), np.zeros(3))
        app = create_app(SimSession(model, tap, control=control, rate=60.0))
        return TestClient(app), control

    def test_hello_advertises_sim_mode(self):
        client, _ = self._client()
        with client:
            with client.websocket_connect("/ws") as ws:
                assert ws.receive_json()["mode"] == "sim"

    def test_pause_step_acks_and_counts(self):
        client, control = self._client()
        with client:
            with client.websocket_connect("/ws") as ws:
                ws.receive_json()
                ws.send_json({"type": "pause"})
                for _ in range(3):
                    ws.send_json({"type": "step"})
                acks = 0
                while acks < 4:
                    msg = ws.receive_json()
                    if msg["type"] == "ack":
                        acks += 1
        assert control.tick == 3

    def test_sliders_disabled_without_teach_mode(self):
        client, _ = self._client()
        with client:
            with client.websocket_connect("/ws") as ws:
                ws.receive_json()
                ws.send_json({"type": "set_joint", "name": "lf_haa", "value": 0.1})
                for _ in range(12):
                    msg = ws.receive_json()
                    if msg["type"] == "error":
                        assert "teach" in msg["text"]
                        return
                pytest.fail("slider accepted without teach_mode")

    def test_base_pose_in_state_frames(self):
        client, _ = self._client()
        with client:
            with client.websocket_connect("/ws") as ws:
                ws.receive_json()
                frame = _next_state(ws)
                assert frame["base"]["pos"][2] == 0.35


class TestStreamRate:
    def test_rate_within_20_percent(self):
        model, _ = load_robot("pend1")
        app = create_app(KinematicsSession(model, rate=30.0))
        with TestClient(app) as client:
            with client.websocket_connect("/ws") as ws:
                ws.receive_json()
                t0 = time.perf_counter()
                n = 0
                while time.perf_counter() - t0 < 1.0:
                    msg = ws.receive_json()
                    if msg["type"] == "state":
                        n += 1
        assert 30 * 0.8 <= n <= 30 * 1.2
