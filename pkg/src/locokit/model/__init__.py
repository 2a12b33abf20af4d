from .gains import emit_gains, parse_gains
from .serialize import (
    MODEL_JSON_SCHEMA,
    model_from_dict,
    model_from_json,
    model_to_dict,
    serialize_model,
)
from .types import (
    Diagnostic,
    FrameSpec,
    GainsConfig,
    GeometryPrimitive,
    JointSpec,
    Link,
    RobotModel,
    SpatialInertia,
)
from .urdf import parse_urdf
from .validate import neutral_configuration, validate_model

__all__ = [
    "Diagnostic",
    "FrameSpec",
    "GainsConfig",
    "GeometryPrimitive",
    "JointSpec",
    "Link",
    "MODEL_JSON_SCHEMA",
    "RobotModel",
    "SpatialInertia",
    "emit_gains",
    "model_from_dict",
    "model_from_json",
    "model_to_dict",
    "neutral_configuration",
    "parse_gains",
    "parse_urdf",
    "serialize_model",
    "validate_model",
]
