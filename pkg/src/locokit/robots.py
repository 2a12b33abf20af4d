"""Robot registry: resolves a robot name (or description path) to its
description, gains and metadata.

The ``robot_name`` string is the single selector that joins description,
gains, backend profile and spawn defaults. Shipped fixtures live in the
package's ``fixtures/`` directory; the ``LOCOKIT_FIXTURES`` environment
variable overrides that directory. A description file ``foo.urdf`` may be
accompanied by ``foo.meta.json`` (floating-base flag, contact frames,
attached frames, tool frame, spawn pose, mock-driver profile) and
``foo.json`` (gains).
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import UnknownRobot
from .model import GainsConfig, RobotModel, parse_gains, parse_urdf

FIXTURE_NAMES = ("pend1", "arm2", "arm6", "quad12")


@dataclass(frozen=True)
class RobotMeta:
    floating_base: bool = False
    contact_frames: tuple = ()
    frames: tuple = ()  # dicts: {"name","link","xyz","rpy"}
    tool_frame: str | None = None
    spawn: tuple = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    initial_q: str = "neutral"  # neutral | home
    mock_interfaces: tuple = ("effort", "position", "velocity")
    mock_profile: str = "ideal"
    substeps: int = 1  # physics substeps per control tick

    @staticmethod
    def from_dict(doc: dict) -> "RobotMeta":
        mock = doc.get("mock", {})
        return RobotMeta(
            floating_base=bool(doc.get("floating_base", False)),
            contact_frames=tuple(doc.get("contact_frames", ())),
            frames=tuple(
                {**f, "xyz": tuple(f.get("xyz", (0, 0, 0))),
                 "rpy": tuple(f.get("rpy", (0, 0, 0)))}
                for f in doc.get("frames", ())
            ),
            tool_frame=doc.get("tool_frame"),
            spawn=tuple(doc.get("spawn", (0.0,) * 6)),
            initial_q=doc.get("initial_q", "neutral"),
            mock_interfaces=tuple(mock.get("interfaces", ("effort", "position", "velocity"))),
            mock_profile=mock.get("profile", "ideal"),
            substeps=int(doc.get("sim", {}).get("substeps", 1)),
        )


def fixtures_dir() -> Path:
    override = os.environ.get("LOCOKIT_FIXTURES")
    if override:
        return Path(override)
    return Path(resources.files("locokit") / "fixtures")


def resolve_description(name_or_path) -> Path:
    """Map a robot name or a filesystem path to a description file."""
    p = Path(name_or_path)
    if p.suffix == ".urdf":
        if p.exists():
            return p
        candidate = fixtures_dir() / p.name
        if candidate.exists():
            return candidate
        raise UnknownRobot(f"description file {name_or_path!r} not found")
    candidate = fixtures_dir() / f"{name_or_path}.urdf"
    if candidate.exists():
        return candidate
    raise UnknownRobot(
        f"unknown robot {name_or_path!r}; fixtures: {', '.join(robot_names())}"
    )


def robot_names():
    d = fixtures_dir()
    if not d.is_dir():
        return []
    return sorted(p.stem for p in d.glob("*.urdf"))


def load_meta(description_path: Path) -> RobotMeta:
    sidecar = description_path.with_suffix(".meta.json")
    if sidecar.exists():
        return RobotMeta.from_dict(json.loads(sidecar.read_text()))
    return RobotMeta()


def load_robot(name_or_path) -> tuple[RobotModel, RobotMeta]:
    path = resolve_description(name_or_path)
    meta = load_meta(path)
    model = parse_urdf(
        path.read_text(),
        floating_base=meta.floating_base,
        contact_frames=meta.contact_frames,
        frames=meta.frames,
    )
    return model, meta


def resolve_gains_path(name_or_path, description_path: Path | None = None) -> Path:
    p = Path(name_or_path)
    if p.exists():
        return p
    if description_path is not None:
        sibling = description_path.with_suffix(".json")
        if p.name == sibling.name and sibling.exists():
            return sibling
    candidate = fixtures_dir() / p.name
    if candidate.exists():
        return candidate
    candidate = fixtures_dir() / f"{name_or_path}.json"
    if candidate.exists():
        return candidate
    raise UnknownRobot(f"gains file {name_or_path!r} not found")


def load_gains(name_or_path, model: RobotModel,
               description_path: Path | None = None) -> GainsConfig:
    path = resolve_gains_path(name_or_path, description_path)
    return parse_gains(path.read_text(), model)


def default_gains_for(name_or_path) -> str:
    """Conventional gains filename for a robot name ("pend1" -> "pend1.json")."""
    return f"{Path(str(name_or_path)).stem}.json"
