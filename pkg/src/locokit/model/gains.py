"""Per-robot controller gains: JSON schema
``{"joints": {"<name>": {"kp": f, "kd": f, "ki": f, "home": f}},
"homing_duration": f}``. ``ki`` may be omitted (defaults to 0)."""
from __future__ import annotations

import json

import numpy as np

from ..errors import HomeOutOfLimits, MissingJoint, NegativeGain, UnknownJoint
from .types import GainsConfig, RobotModel


def parse_gains(source: str, model: RobotModel) -> GainsConfig:
    """Parse a gains JSON document against a model.

    The file may list joints in any order; the result is re-sorted to the
    model's depth-first joint order.
    """
    doc = json.loads(source)
    entries = doc.get("joints", {})
    model_names = model.joint_names
    unknown = set(entries) - set(model_names)
    if unknown:
        raise UnknownJoint(f"gains name joints not in the model: {sorted(unknown)}")

    kp, kd, ki, q_home = [], [], [], []
    lo, hi = model.position_limits
    for i, jn in enumerate(model_names):
        if jn not in entries:
            raise MissingJoint(f"no gains entry for joint {jn!r}")
        e = entries[jn]
        for key in ("kp", "kd", "home"):
            if key not in e:
                raise MissingJoint(f"joint {jn!r} missing field {key!r}")
        for key in ("kp", "kd", "ki"):
            if float(e.get(key, 0.0)) < 0.0:
                raise NegativeGain(f"joint {jn!r} has negative {key}")
        home = float(e["home"])
        if home < lo[i] - 1e-12 or home > hi[i] + 1e-12:
            raise HomeOutOfLimits(
                f"joint {jn!r} home {home} outside [{lo[i]}, {hi[i]}]"
            )
        kp.append(float(e["kp"]))
        kd.append(float(e["kd"]))
        ki.append(float(e.get("ki", 0.0)))
        q_home.append(home)

    return GainsConfig(
        joint_names=model_names,
        kp=np.array(kp),
        kd=np.array(kd),
        ki=np.array(ki),
        q_home=np.array(q_home),
        homing_duration=float(doc.get("homing_duration", 2.0)),
    )


def emit_gains(config: GainsConfig) -> str:
    """Inverse of :func:`parse_gains` (joint order preserved)."""
    doc = {
        "joints": {
            name: {
                "kp": float(config.kp[i]),
                "kd": float(config.kd[i]),
                "ki": float(config.ki[i]),
                "home": float(config.q_home[i]),
            }
            for i, name in enumerate(config.joint_names)
        },
        "homing_duration": config.homing_duration,
    }
    return json.dumps(doc, indent=2)
