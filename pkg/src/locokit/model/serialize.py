"""Model <-> JSON serialization.

This is the wire format of the visualizer's ``/model`` endpoint; the JSON
schema below is the contract the browser client builds its scene from.
"""
from __future__ import annotations

import json

import numpy as np

from .types import (
    FrameSpec,
    GeometryPrimitive,
    JointSpec,
    Link,
    RobotModel,
    SpatialInertia,
)

MODEL_JSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name", "root_link", "floating_base", "contact_frames", "links", "joints"],
    "properties": {
        "name": {"type": "string"},
        "root_link": {"type": "string"},
        "floating_base": {"type": "boolean"},
        "contact_frames": {"type": "array", "items": {"type": "string"}},
        "links": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "mass", "com", "inertia", "visuals"],
                "properties": {
                    "name": {"type": "string"},
                    "mass": {"type": "number"},
                    "com": {"type": "array", "items": {"type": "number"},
                            "minItems": 3, "maxItems": 3},
                    "inertia": {
                        "type": "array", "minItems": 3, "maxItems": 3,
                        "items": {"type": "array", "items": {"type": "number"},
                                  "minItems": 3, "maxItems": 3},
                    },
                    "visuals": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["kind", "size", "origin"],
                            "properties": {
                                "kind": {"enum": ["box", "cylinder", "sphere"]},
                                "size": {"type": "array", "items": {"type": "number"}},
                                "origin": {"$ref": "#/$defs/origin"},
                            },
                        },
                    },
                },
            },
        },
        "joints": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "type", "axis", "origin", "parent", "child"],
                "properties": {
                    "name": {"type": "string"},
                    "type": {"enum": ["revolute", "prismatic", "fixed"]},
                    "axis": {"type": "array", "items": {"type": "number"},
                             "minItems": 3, "maxItems": 3},
                    "origin": {"$ref": "#/$defs/origin"},
                    "parent": {"type": "string"},
                    "child": {"type": "string"},
                    "limits": {
                        "type": "object",
                        "required": ["lower", "upper", "effort", "velocity"],
                        "properties": {
                            "lower": {"type": "number"},
                            "upper": {"type": "number"},
                            "effort": {"type": "number"},
                            "velocity": {"type": "number"},
                        },
                    },
                },
            },
        },
        "frames": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "link", "origin"],
                "properties": {
                    "name": {"type": "string"},
                    "link": {"type": "string"},
                    "origin": {"$ref": "#/$defs/origin"},
                },
            },
        },
    },
    "$defs": {
        "origin": {
            "type": "object",
            "required": ["xyz", "rpy"],
            "properties": {
                "xyz": {"type": "array", "items": {"type": "number"},
                        "minItems": 3, "maxItems": 3},
                "rpy": {"type": "array", "items": {"type": "number"},
                        "minItems": 3, "maxItems": 3},
            },
        }
    },
}


def _vec(a):
    return [float(x) for x in np.asarray(a).ravel()]


def _origin_dict(xyz, rpy):
    return {"xyz": _vec(xyz), "rpy": _vec(rpy)}


def model_to_dict(model: RobotModel) -> dict:
    links = []
    for l in model.links:
        links.append(
            {
                "name": l.name,
                "mass": float(l.inertia.mass),
                "com": _vec(l.inertia.com),
                "inertia": [_vec(row) for row in l.inertia.inertia_rot],
                "visuals": [
                    {
                        "kind": v.kind,
                        "size": _vec(v.size),
                        "origin": _origin_dict(v.xyz, v.rpy),
                    }
                    for v in l.visuals
                ],
            }
        )
    joints = []
    for j in model.joints:
        rec = {
            "name": j.name,
            "type": j.kind,
            "axis": _vec(j.axis),
            "origin": _origin_dict(j.origin_xyz, j.origin_rpy),
            "parent": j.parent,
            "child": j.child,
        }
        if j.movable:
            rec["limits"] = {
                "lower": float(j.lower),
                "upper": float(j.upper),
                "effort": float(j.effort),
                "velocity": float(j.velocity),
            }
        joints.append(rec)
    return {
        "name": model.name,
        "root_link": model.root_link,
        "floating_base": model.floating_base,
        "contact_frames": list(model.contact_frames),
        "links": links,
        "joints": joints,
        "frames": [
            {"name": f.name, "link": f.link, "origin": _origin_dict(f.xyz, f.rpy)}
            for f in model.frames
        ],
    }


def serialize_model(model: RobotModel) -> str:
    return json.dumps(model_to_dict(model), indent=2)


def model_from_dict(doc: dict) -> RobotModel:
    links = tuple(
        Link(
            l["name"],
            SpatialInertia(l["mass"], np.array(l["com"]), np.array(l["inertia"])),
            tuple(
                GeometryPrimitive(
                    v["kind"], tuple(v["size"]),
                    np.array(v["origin"]["xyz"]), np.array(v["origin"]["rpy"]),
                )
                for v in l.get("visuals", [])
            ),
        )
        for l in doc["links"]
    )
    joints = tuple(
        JointSpec(
            j["name"], j["type"], np.array(j["axis"]),
            np.array(j["origin"]["xyz"]), np.array(j["origin"]["rpy"]),
            j["parent"], j["child"],
            lower=j.get("limits", {}).get("lower", 0.0),
            upper=j.get("limits", {}).get("upper", 0.0),
            effort=j.get("limits", {}).get("effort", 0.0),
            velocity=j.get("limits", {}).get("velocity", 0.0),
        )
        for j in doc["joints"]
    )
    frames = tuple(
        FrameSpec(
            f["name"], f["link"],
            np.array(f["origin"]["xyz"]), np.array(f["origin"]["rpy"]),
        )
        for f in doc.get("frames", [])
    )
    return RobotModel(
        name=doc["name"],
        links=links,
        joints=joints,
        root_link=doc["root_link"],
        floating_base=doc["floating_base"],
        contact_frames=tuple(doc.get("contact_frames", [])),
        frames=frames,
    )


def model_from_json(text: str) -> RobotModel:
    return model_from_dict(json.loads(text))
