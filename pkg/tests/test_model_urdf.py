import numpy as np
import pytest

from locokit.errors import (
    DanglingReference,
    DuplicateName,
    MalformedXml,
    ModelValidationError,
    TreeStructureError,
    UnsupportedJointType,
)
from locokit.model import parse_urdf
from locokit.robots import fixtures_dir

MINIMAL = '<robot name="tiny"><link name="base"/></robot>'

TWO_LINK = """
<robot name="two">
  <link name="base"/>
  <link name="arm">
    <inertial><origin xyz="0.5 0 0"/><mass value="1"/>
      <inertia ixx="0" ixy="0" ixz="0" iyy="0" iyz="0" izz="0"/></inertial>
  </link>
  <joint name="j" type="revolute">
    <axis xyz="0 1 0"/><parent link="base"/><child link="arm"/>
    <limit lower="-1" upper="1" effort="10" velocity="5"/>
  </joint>
</robot>
"""


def test_smallest_legal_model():
    m = parse_urdf(MINIMAL)
    assert len(m.links) == 1
    assert len(m.joints) == 0
    assert m.root_link == "base"


def test_pend1_fixture_roundtrip():
    text = (fixtures_dir() / "pend1.urdf").read_text()
    m = parse_urdf(text)
    assert len(m.links) == 2
    assert len(m.joints) == 1
    j = m.joints[0]
    assert j.kind == "revolute"
    assert np.allclose(j.axis, [0, 1, 0])
    arm = m.link_map["arm"]
    assert arm.inertia.mass == 1.0
    assert np.allclose(arm.inertia.com, [0.5, 0, 0])


def test_dangling_child_reference():
    bad = TWO_LINK.replace('<child link="arm"/>', '<child link="ghost"/>')
    with pytest.raises(DanglingReference, match="ghost"):
        parse_urdf(bad)


def test_dangling_parent_reference():
    bad = TWO_LINK.replace('<parent link="base"/>', '<parent link="nowhere"/>')
    with pytest.raises(DanglingReference, match="nowhere"):
        parse_urdf(bad)


def test_malformed_xml_carries_position():
    with pytest.raises(MalformedXml) as exc:
        parse_urdf("<robot name='x'><link name='a'>")
    assert exc.value.position is not None


def test_unsupported_joint_type():
    bad = TWO_LINK.replace('type="revolute"', 'type="planar"')
    with pytest.raises(UnsupportedJointType, match="planar"):
        parse_urdf(bad)


def test_duplicate_link_name():
    bad = MINIMAL.replace("</robot>", '<link name="base"/></robot>')
    with pytest.raises(DuplicateName):
        parse_urdf(bad)


def test_duplicate_joint_name():
    extra = TWO_LINK.replace(
        "</robot>",
        '<link name="arm2"/><joint name="j" type="fixed">'
        '<parent link="arm"/><child link="arm2"/></joint></robot>',
    )
    with pytest.raises(DuplicateName):
        parse_urdf(extra)


def test_two_roots_rejected():
    bad = MINIMAL.replace("</robot>", '<link name="island"/></robot>')
    with pytest.raises(TreeStructureError):
        parse_urdf(bad)


def test_cycle_rejected():
    cyc = TWO_LINK.replace(
        "</robot>",
        '<joint name="back" type="fixed">'
        '<parent link="arm"/><child link="base"/></joint></robot>',
    )
    with pytest.raises(TreeStructureError):
        parse_urdf(cyc)


def test_unknown_elements_warn_not_fail():
    text = TWO_LINK.replace(
        "</robot>", "<transmission name='t'/><gazebo/></robot>"
    )
    m = parse_urdf(text)
    assert any("transmission" in w for w in m.warnings)
    assert any("gazebo" in w for w in m.warnings)


def test_invalid_axis_rejected():
    bad = TWO_LINK.replace('<axis xyz="0 1 0"/>', '<axis xyz="0 2 0"/>')
    with pytest.raises(ModelValidationError, match="axis"):
        parse_urdf(bad)


def test_reversed_limits_rejected():
    bad = TWO_LINK.replace('lower="-1" upper="1"', 'lower="1" upper="-1"')
    with pytest.raises(ModelValidationError):
        parse_urdf(bad)


def test_missing_limits_on_revolute_rejected():
    bad = TWO_LINK.replace(
        '<limit lower="-1" upper="1" effort="10" velocity="5"/>', ""
    )
    with pytest.raises(ModelValidationError):
        parse_urdf(bad)


def test_parse_determinism_bitwise():
    text = (fixtures_dir() / "quad12.urdf").read_text()
    a = parse_urdf(text)
    b = parse_urdf(text)
    assert a.joint_names == b.joint_names
    assert [l.name for l in a.links] == [l.name for l in b.links]
    for la, lb in zip(a.links, b.links):
        assert la.inertia.mass == lb.inertia.mass
        assert np.array_equal(la.inertia.com, lb.inertia.com)
        assert np.array_equal(la.inertia.inertia_rot, lb.inertia.inertia_rot)
    for ja, jb in zip(a.joints, b.joints):
        assert ja.name == jb.name
        assert (ja.kind, ja.parent, ja.child) == (jb.kind, jb.parent, jb.child)
        assert np.array_equal(ja.axis, jb.axis)
        assert np.array_equal(ja.origin_xyz, jb.origin_xyz)
        assert np.array_equal(ja.origin_rpy, jb.origin_rpy)
        assert (ja.lower, ja.upper, ja.effort, ja.velocity) == (
            jb.lower, jb.upper, jb.effort, jb.velocity
        )


def test_depth_first_joint_order_document_tiebreak():
    text = """
    <robot name="y">
      <link name="base"/><link name="a"/><link name="b"/><link name="aa"/>
      <joint name="j_a" type="fixed"><parent link="base"/><child link="a"/></joint>
      <joint name="j_b" type="fixed"><parent link="base"/><child link="b"/></joint>
      <joint name="j_aa" type="fixed"><parent link="a"/><child link="aa"/></joint>
    </robot>
    """
    m = parse_urdf(text)
    # depth-first: descend through a (and its subtree) before b
    assert [j.name for j in m.joints] == ["j_a", "j_aa", "j_b"]


def test_fixture_counts(all_models):
    pend1, arm2, arm6, quad12 = (
        all_models["pend1"], all_models["arm2"],
        all_models["arm6"], all_models["quad12"],
    )
    assert (len(pend1.links), len(pend1.joints)) == (2, 1)
    assert (len(arm2.links), len(arm2.joints)) == (3, 2)
    assert (len(quad12.links), len(quad12.joints)) == (13, 12)
    assert quad12.floating_base
    assert len(quad12.contact_frames) == 4
    assert arm6.nq == 6
