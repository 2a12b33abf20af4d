"""Parser for the URDF subset used by this framework.

Supported elements: ``robot, link, inertial(mass, inertia, origin),
visual(geometry box|cylinder|sphere, origin), joint(type revolute|prismatic|
fixed, origin, axis, parent, child, limit)``. Everything else (transmission,
gazebo extensions, ...) is skipped with a recorded warning so real-world
files load. ``rpy`` attributes are fixed-axis roll-pitch-yaw radians.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np

from ..errors import (
    DanglingReference,
    DuplicateName,
    MalformedXml,
    ModelValidationError,
    TreeStructureError,
    UnsupportedJointType,
)
from .types import (
    JOINT_KINDS,
    FrameSpec,
    GeometryPrimitive,
    JointSpec,
    Link,
    RobotModel,
    SpatialInertia,
)
from .validate import validate_model

_KNOWN_LINK_CHILDREN = {"inertial", "visual", "collision"}
_KNOWN_JOINT_CHILDREN = {"origin", "axis", "parent", "child", "limit", "dynamics"}


def _floats(text, n, what):
    parts = str(text).split()
    if len(parts) != n:
        raise MalformedXml(f"expected {n} numbers in {what}, got {text!r}")
    return np.array([float(p) for p in parts])


def _origin(elem):
    if elem is None:
        return np.zeros(3), np.zeros(3)
    xyz = _floats(elem.get("xyz", "0 0 0"), 3, "origin xyz")
    rpy = _floats(elem.get("rpy", "0 0 0"), 3, "origin rpy")
    return xyz, rpy


def _parse_inertial(elem, link_name):
    if elem is None:
        return SpatialInertia.zero()
    origin = elem.find("origin")
    com, _ = _origin(origin)
    mass_elem = elem.find("mass")
    mass = float(mass_elem.get("value", "0")) if mass_elem is not None else 0.0
    inertia = np.zeros((3, 3))
    ie = elem.find("inertia")
    if ie is not None:
        ixx = float(ie.get("ixx", "0"))
        iyy = float(ie.get("iyy", "0"))
        izz = float(ie.get("izz", "0"))
        ixy = float(ie.get("ixy", "0"))
        ixz = float(ie.get("ixz", "0"))
        iyz = float(ie.get("iyz", "0"))
        inertia = np.array([[ixx, ixy, ixz], [ixy, iyy, iyz], [ixz, iyz, izz]])
    return SpatialInertia(mass, com, inertia)


def _parse_visuals(link_elem, link_name, warnings):
    visuals = []
    for v in link_elem.findall("visual"):
        xyz, rpy = _origin(v.find("origin"))
        geom = v.find("geometry")
        if geom is None or len(geom) == 0:
            warnings.append(f"link {link_name}: visual without geometry skipped")
            continue
        shape = geom[0]
        if shape.tag == "box":
            size = tuple(_floats(shape.get("size", "0 0 0"), 3, "box size"))
        elif shape.tag == "cylinder":
            size = (float(shape.get("radius", "0")), float(shape.get("length", "0")))
        elif shape.tag == "sphere":
            size = (float(shape.get("radius", "0")),)
        else:
            warnings.append(
                f"link {link_name}: unsupported geometry <{shape.tag}> skipped"
            )
            continue
        visuals.append(GeometryPrimitive(shape.tag, size, xyz, rpy))
    return tuple(visuals)


def parse_urdf(source, *, floating_base=False, contact_frames=(), frames=()):
    """Parse URDF text into a validated, immutable :class:`RobotModel`.

    ``floating_base``, ``contact_frames`` and ``frames`` are robot metadata
    that plain URDF does not carry; the fixture registry supplies them from
    the per-robot sidecar file.
    """
    try:
        root = ET.fromstring(source)
    except ET.ParseError as e:
        raise MalformedXml(str(e), position=getattr(e, "position", None)) from e
    if root.tag != "robot":
        raise MalformedXml(f"top-level element is <{root.tag}>, expected <robot>")

    name = root.get("name", "robot")
    warnings = []

    links = {}
    link_order = []
    joints = {}
    joint_order = []
    for elem in root:
        if elem.tag == "link":
            lname = elem.get("name")
            if lname is None:
                raise MalformedXml("link without name attribute")
            if lname in links:
                raise DuplicateName(f"duplicate link name {lname!r}")
            for child in elem:
                if child.tag not in _KNOWN_LINK_CHILDREN:
                    warnings.append(f"link {lname}: ignoring element <{child.tag}>")
            links[lname] = Link(
                lname,
                _parse_inertial(elem.find("inertial"), lname),
                _parse_visuals(elem, lname, warnings),
            )
            link_order.append(lname)
        elif elem.tag == "joint":
            jname = elem.get("name")
            kind = elem.get("type")
            if jname is None:
                raise MalformedXml("joint without name attribute")
            if jname in joints:
                raise DuplicateName(f"duplicate joint name {jname!r}")
            if kind not in JOINT_KINDS:
                raise UnsupportedJointType(
                    f"joint {jname!r} has unsupported type {kind!r}"
                )
            for child in elem:
                if child.tag not in _KNOWN_JOINT_CHILDREN:
                    warnings.append(f"joint {jname}: ignoring element <{child.tag}>")
            parent_e = elem.find("parent")
            child_e = elem.find("child")
            if parent_e is None or child_e is None:
                raise MalformedXml(f"joint {jname!r} missing parent or child")
            xyz, rpy = _origin(elem.find("origin"))
            axis_e = elem.find("axis")
            axis = (
                _floats(axis_e.get("xyz", "1 0 0"), 3, "axis")
                if axis_e is not None
                else np.array([1.0, 0.0, 0.0])
            )
            limit_e = elem.find("limit")
            lo = float(limit_e.get("lower", "0")) if limit_e is not None else 0.0
            hi = float(limit_e.get("upper", "0")) if limit_e is not None else 0.0
            effort = float(limit_e.get("effort", "inf")) if limit_e is not None else (
                0.0 if kind == "fixed" else float("inf")
            )
            vel = float(limit_e.get("velocity", "inf")) if limit_e is not None else (
                0.0 if kind == "fixed" else float("inf")
            )
            joints[jname] = JointSpec(
                jname, kind, axis, xyz, rpy,
                parent_e.get("link"), child_e.get("link"),
                lower=lo, upper=hi, effort=effort, velocity=vel,
            )
            joint_order.append(jname)
        elif elem.tag == "material":
            pass  # cosmetic, silently accepted
        else:
            warnings.append(f"ignoring element <{elem.tag}>")

    if not links:
        raise MalformedXml("robot has no links")

    for j in joints.values():
        if j.parent not in links:
            raise DanglingReference(
                f"joint {j.name!r} names a nonexistent parent link {j.parent!r}"
            )
        if j.child not in links:
            raise DanglingReference(
                f"joint {j.name!r} names a nonexistent child link {j.child!r}"
            )

    # Root = the unique link that is never a joint child.
    children = {j.child for j in joints.values()}
    roots = [l for l in link_order if l not in children]
    if len(roots) != 1:
        raise TreeStructureError(
            f"expected exactly one root link, found {roots or 'none (cycle)'}"
        )
    root_link = roots[0]

    child_counts = {}
    for j in joints.values():
        child_counts[j.child] = child_counts.get(j.child, 0) + 1
    for lname, n in child_counts.items():
        if n > 1:
            raise TreeStructureError(f"link {lname!r} has {n} parent joints")

    # Depth-first reordering; ties between siblings break by document order.
    by_parent = {}
    for jname in joint_order:
        by_parent.setdefault(joints[jname].parent, []).append(jname)
    ordered_joints = []
    ordered_links = [root_link]

    def visit(lname):
        for jname in by_parent.get(lname, []):
            ordered_joints.append(joints[jname])
            ordered_links.append(joints[jname].child)
            visit(joints[jname].child)

    visit(root_link)

    if len(ordered_joints) != len(joints):
        missing = set(joints) - {j.name for j in ordered_joints}
        raise TreeStructureError(
            f"joints not reachable from root {root_link!r}: {sorted(missing)}"
        )

    model = RobotModel(
        name=name,
        links=tuple(links[l] for l in ordered_links),
        joints=tuple(ordered_joints),
        root_link=root_link,
        floating_base=bool(floating_base),
        contact_frames=tuple(contact_frames),
        frames=tuple(
            f if isinstance(f, FrameSpec) else FrameSpec(**f) for f in frames
        ),
        warnings=tuple(warnings),
    )
    errors = [d for d in validate_model(model) if d.severity == "error"]
    if errors:
        raise ModelValidationError(errors)
    return model
