"""Generate the shared-math FK regression fixture for the browser client.

50 random configurations across the fixture robots; for each, the
framework's forward kinematics gives the end-effector/foot world position,
projected through the same pinhole camera the client test implements.

Run: python3 tools/gen_fk_golden.py
"""
import json
from pathlib import Path

import numpy as np

from locokit.kindyn import Configuration, forward_kinematics
from locokit.model import model_to_dict
from locokit.robots import load_robot

CAMERA = {
    "eye": [2.2, 1.6, 1.4],
    "target": [0.0, 0.0, 0.3],
    "up": [0.0, 0.0, 1.0],
    "fovYDeg": 60.0,
    "width": 1920,
    "height": 1080,
}


def project(point):
    eye = np.array(CAMERA["eye"])
    target = np.array(CAMERA["target"])
    up = np.array(CAMERA["up"])
    zc = eye - target
    zc /= np.linalg.norm(zc)
    xc = np.cross(up, zc)
    xc /= np.linalg.norm(xc)
    yc = np.cross(zc, xc)
    d = np.asarray(point) - eye
    x, y, z = xc @ d, yc @ d, zc @ d
    f = 1.0 / np.tan(np.radians(CAMERA["fovYDeg"]) / 2.0)
    aspect = CAMERA["width"] / CAMERA["height"]
    xn = (f / aspect) * (x / -z)
    yn = f * (y / -z)
    return [
        float((xn + 1) / 2 * CAMERA["width"]),
        float((1 - (yn + 1) / 2) * CAMERA["height"]),
    ]


def main():
    rng = np.random.default_rng(2025)
    cases = []
    models = {}
    plan = [("arm2", "ee", 15), ("arm6", "tool0", 20), ("quad12", "lf_foot", 15)]
    for name, frame, count in plan:
        model, _ = load_robot(name)
        models[name] = model_to_dict(model)
        lo, hi = model.position_limits
        for _ in range(count):
            q = rng.uniform(np.maximum(lo, -np.pi), np.minimum(hi, np.pi))
            if model.floating_base:
                base_pos = rng.uniform(-0.3, 0.3, 3) + np.array([0, 0, 0.4])
                base_rpy = rng.uniform(-0.3, 0.3, 3)
                conf = Configuration(base_pos, base_rpy, q)
                base = {"pos": base_pos.tolist(), "rpy": base_rpy.tolist()}
            else:
                conf = Configuration.fixed(q)
                base = None
            pos = forward_kinematics(model, conf)[frame].pos
            cases.append(
                {
                    "model": name,
                    "frame": frame,
                    "q": q.tolist(),
                    "base": base,
                    "world": pos.tolist(),
                    "pixel": project(pos),
                }
            )
    out = {
        "camera": CAMERA,
        "models": models,
        "cases": cases,
    }
    dest = Path(__file__).resolve().parent.parent / "frontend/tests/fixtures/fk_golden.json"
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(json.dumps(out, indent=1))
    print(f"wrote {dest} ({len(cases)} cases)")


if __name__ == "__main__":
    main()
