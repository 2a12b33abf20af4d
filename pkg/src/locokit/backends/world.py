"""World configuration files: gravity, contact parameters, spawn pose.

JSON schema: ``{"gravity": [0,0,-9.81], "contact": {"k_n": f, "d_n": f,
"mu": f, "d_t": f}, "spawn": [x, y, z, roll, pitch, yaw]}``; every key is
optional and defaults apply.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .contact import ContactParams


@dataclass(frozen=True)
class WorldConfig:
    gravity: tuple = (0.0, 0.0, -9.81)
    contact: ContactParams = field(default_factory=ContactParams)
    spawn: tuple | None = None

    @property
    def gravity_vec(self):
        return np.asarray(self.gravity, dtype=float)


def world_from_dict(doc: dict) -> WorldConfig:
    contact = doc.get("contact", {})
    return WorldConfig(
        gravity=tuple(doc.get("gravity", (0.0, 0.0, -9.81))),
        contact=ContactParams(
            k_n=float(contact.get("k_n", 1e5)),
            d_n=float(contact.get("d_n", 1e3)),
            mu=float(contact.get("mu", 0.8)),
            d_t=float(contact.get("d_t", 1e3)),
        ),
        spawn=tuple(doc["spawn"]) if "spawn" in doc else None,
    )


def load_world(path) -> WorldConfig:
    with open(path) as f:
        return world_from_dict(json.load(f))
