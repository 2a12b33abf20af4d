"""Flattened array form of a RobotModel, shared by both kernel backends.

Fixed joints are folded away: their child links' inertias are lumped into
the nearest movable ancestor body and their frames become constant offsets.
The resulting arrays describe one movable body per non-fixed joint, ordered
depth-first (the model's canonical joint order), with ``parent[i] < i`` and
-1 denoting the base/root.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from ..errors import UnknownFrame
from ..transforms import rpy_to_matrix
from ..model.types import RobotModel

REVOLUTE = 0
PRISMATIC = 1


def _lump(mass_a, com_a, I_a, mass_b, com_b, I_b):
    """Combine two rigid bodies expressed in one common frame."""
    m = mass_a + mass_b
    if m <= 0.0:
        return m, np.zeros(3), I_a + I_b
    com = (mass_a * com_a + mass_b * com_b) / m

    def shifted(I, mass, c):
        r = c - com
        return I + mass * ((r @ r) * np.eye(3) - np.outer(r, r))

    return m, com, shifted(I_a, mass_a, com_a) + shifted(I_b, mass_b, com_b)


@dataclass(eq=False)
class NumericModel:
    nb: int
    floating: bool
    parent: np.ndarray  # int32 (nb,)
    jtype: np.ndarray  # uint8 (nb,)
    axis: np.ndarray  # (nb, 3) child frame
    tr_rot: np.ndarray  # (nb, 9) parent body frame -> joint frame
    tr_pos: np.ndarray  # (nb, 3)
    mass: np.ndarray  # (nb,)
    com: np.ndarray  # (nb, 3) body frame
    inertia: np.ndarray  # (nb, 9) about com, body frame
    base_mass: float
    base_com: np.ndarray  # (3,) base frame
    base_inertia: np.ndarray  # (9,) about base com
    frames: dict  # name -> (body_idx, R_off (3,3), p_off (3,))
    joint_of_body: tuple  # joint names, body order (== model joint order)
    chains: dict  # frame name -> tuple of body indices root->frame

    @property
    def nv(self) -> int:
        return self.nb + (6 if self.floating else 0)

    def frame_entry(self, name):
        try:
            return self.frames[name]
        except KeyError:
            raise UnknownFrame(f"frame {name!r} not in model") from None

    def chain_to(self, name):
        """Movable body indices on the path root -> frame, outboard order."""
        try:
            return self.chains[name]
        except KeyError:
            raise UnknownFrame(f"frame {name!r} not in model") from None


def build_numeric(model: RobotModel) -> NumericModel:
    movable = model.movable_joints
    nb = len(movable)
    parent = np.full(nb, -1, dtype=np.int32)
    jtype = np.zeros(nb, dtype=np.uint8)
    axis = np.zeros((nb, 3))
    tr_rot = np.zeros((nb, 9))
    tr_pos = np.zeros((nb, 3))
    mass = np.zeros(nb)
    com = np.zeros((nb, 3))
    inertia = np.zeros((nb, 9))

    body_index = {j.name: i for i, j in enumerate(movable)}
    # link name -> (body idx, R offset, p offset); root maps to the base.
    attach = {model.root_link: (-1, np.eye(3), np.zeros(3))}

    root_inertia = model.link_map[model.root_link].inertia
    base_mass = float(root_inertia.mass)
    base_com = np.array(root_inertia.com)
    base_I = np.array(root_inertia.inertia_rot)

    for j in model.joints:  # depth-first: parents are attached already
        bp, Rp, pp = attach[j.parent]
        R_origin = rpy_to_matrix(j.origin_rpy)
        R_j = Rp @ R_origin
        p_j = pp + Rp @ j.origin_xyz
        child_link = model.link_map[j.child]
        si = child_link.inertia
        if j.kind == "fixed":
            attach[j.child] = (bp, R_j, p_j)
            # Lump the rigidly attached child into its movable ancestor.
            c_in_parent = p_j + R_j @ si.com
            I_in_parent = R_j @ si.inertia_rot @ R_j.T
            if bp < 0:
                base_mass, base_com, base_I = _lump(
                    base_mass, base_com, base_I, si.mass, c_in_parent, I_in_parent
                )
            else:
                m, c, I = _lump(
                    mass[bp], com[bp], inertia[bp].reshape(3, 3),
                    si.mass, c_in_parent, I_in_parent,
                )
                mass[bp], com[bp], inertia[bp] = m, c, I.ravel()
        else:
            k = body_index[j.name]
            parent[k] = bp
            jtype[k] = REVOLUTE if j.kind == "revolute" else PRISMATIC
            axis[k] = j.axis
            tr_rot[k] = R_j.ravel()
            tr_pos[k] = p_j
            mass[k] = si.mass
            com[k] = si.com
            inertia[k] = np.asarray(si.inertia_rot).ravel()
            attach[j.child] = (k, np.eye(3), np.zeros(3))

    frames = {name: attach[name] for name in attach}
    for f in model.frames:
        bi, R0, p0 = attach[f.link]
        Rf = rpy_to_matrix(f.rpy)
        frames[f.name] = (bi, R0 @ Rf, p0 + R0 @ f.xyz)

    chains = {}
    for name, (bi, _, _) in frames.items():
        chain = []
        k = bi
        while k >= 0:
            chain.append(k)
            k = int(parent[k])
        chains[name] = tuple(reversed(chain))

    return NumericModel(
        nb=nb,
        floating=model.floating_base,
        parent=parent,
        jtype=jtype,
        axis=axis,
        tr_rot=tr_rot,
        tr_pos=tr_pos,
        mass=mass,
        com=com,
        inertia=inertia,
        base_mass=base_mass,
        base_com=base_com,
        base_inertia=base_I.ravel(),
        frames=frames,
        joint_of_body=tuple(j.name for j in movable),
        chains=chains,
    )


_cache: "weakref.WeakKeyDictionary[RobotModel, NumericModel]" = weakref.WeakKeyDictionary()


def numeric_model(model: RobotModel) -> NumericModel:
    nm = _cache.get(model)
    if nm is None:
        nm = build_numeric(model)
        _cache[model] = nm
    return nm
